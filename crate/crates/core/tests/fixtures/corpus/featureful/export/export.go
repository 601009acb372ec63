package export

/*
#cgo pkg-config: libfoo
#cgo linux CPPFLAGS: -DLINUX
#include <stdint.h>
static int twice(int v) { return v * 2; }
*/
import "C"

//export GoAdd
func GoAdd(a, b C.int) C.int {
	return a + b
}

//export GoTwice
func GoTwice(v C.int) C.int {
	return C.twice(v)
}

// helper is not exported: //export helper
func helper() {}
