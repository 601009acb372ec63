package p

// #include <stdlib.h>
// typedef struct { int x; } point;
import "C"
import "unsafe"

func Points(n int) []C.point {
	raw := C.calloc(C.size_t(n), C.sizeof_point)
	return (*[1 << 20]C.point)(unsafe.Pointer(raw))[:n:n]
}
