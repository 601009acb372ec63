package strs

// #include <stdlib.h>
// #include <stdio.h>
import "C"
import "unsafe"

func Print(s string) {
	cs := C.CString(s)
	defer C.free(unsafe.Pointer(cs))
	C.puts(cs)
}

func Length(p *C.char, n int) string {
	return C.GoStringN(p, C.int(n))
}
