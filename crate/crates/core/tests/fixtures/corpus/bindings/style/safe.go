package style

// #include <stdlib.h>
// #include <string.h>
import "C"
import "unsafe"

func safeStyle(s string, dst, src []byte, p *C.char, n C.int) []byte {
	cs := C.CString(s)
	defer C.free(unsafe.Pointer(cs))
	C.memcpy(unsafe.Pointer(&dst[0]), unsafe.Pointer(&src[0]), C.size_t(len(src)))
	return C.GoBytes(unsafe.Pointer(p), n)
}
