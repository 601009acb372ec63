package p

// #include <string.h>
import "C"
import "unsafe"

func Copy(p unsafe.Pointer, n int) []byte {
	return C.GoBytes(p, C.int(n))
}
