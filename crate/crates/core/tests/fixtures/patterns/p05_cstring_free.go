package p

// #include <stdio.h>
// #include <stdlib.h>
import "C"
import "unsafe"

func Say(s string) {
	cs := C.CString(s)
	defer C.free(unsafe.Pointer(cs))
	C.puts(cs)
}
