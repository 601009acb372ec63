package p

// #include <stdlib.h>
import "C"

func Send(data []byte) {
	p := C.CBytes(data)
	defer C.free(p)
	C.consume((*C.char)(p), C.int(len(data)))
}
