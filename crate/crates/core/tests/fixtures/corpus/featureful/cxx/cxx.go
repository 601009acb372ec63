package cxx

// #cgo CXXFLAGS: -std=c++11
// #cgo LDFLAGS: -lstdc++
// #include "wrap.h"
import "C"

func Run() int {
	v := int(C.wrap_run())
	C.wrap_free(C.wrap_new(C.int(v), C.sizeof_int))
	return v
}
