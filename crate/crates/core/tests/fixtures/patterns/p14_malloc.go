package p

// #include <stdlib.h>
import "C"
import "unsafe"

func Alloc(n int) unsafe.Pointer {
	return C.malloc(C.size_t(n))
}
