package mixed

// #include <stdlib.h>
// void use(void *p);
import "C"
import (
	"unsafe"

	"example.com/other"
)

type pair struct {
	a, b int32
}

func run(buf []uint64) {
	var x C.double
	var pr pair
	C.use(unsafe.Pointer(&x))
	C.use(unsafe.Pointer(&pr))
	C.use(unsafe.Pointer(&buf[0]))
	C.use(unsafe.Pointer(other.Ptr))
}
