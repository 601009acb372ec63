package style

// #include <stdlib.h>
// #include <string.h>
import "C"
import "unsafe"

func unsafeStyle(s string, dst, src []byte, p *C.char, n C.int) []byte {
	cs := unsafe.Pointer(C.CString(s))
	defer C.free(cs)
	d, sp := unsafe.Pointer(&dst[0]), unsafe.Pointer(&src[0])
	C.memcpy(d, sp, C.size_t(len(src)))
	raw := unsafe.Pointer(p)
	return C.GoBytes(raw, n)
}
