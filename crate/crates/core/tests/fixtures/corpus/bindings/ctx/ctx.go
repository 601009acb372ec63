package contexts

// #include <stdio.h>
// #include <stdlib.h>
// #include <string.h>
import "C"
import "unsafe"

func c1(s string) {
	cs := C.CString(s)
	defer C.free(unsafe.Pointer(cs))
	C.puts(cs)
}

func c2(dst, src []byte) {
	C.memcpy(unsafe.Pointer(&dst[0]), unsafe.Pointer(&src[0]), C.size_t(len(src)))
}

func c3(p *C.char, n C.int) []byte {
	return C.GoBytes(unsafe.Pointer(p), n)
}
