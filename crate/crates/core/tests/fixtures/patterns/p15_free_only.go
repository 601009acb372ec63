package p

// #include <stdlib.h>
import "C"
import "unsafe"

func Release(p unsafe.Pointer) {
	C.free(p)
}
