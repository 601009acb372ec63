package strs_test

// #include <stdlib.h>
import "C"

func helper() {
	C.free(nil)
	_ = C.int(3)
}
