package p

// #include "msg.h"
import "C"
import "unsafe"

func Msg(buf []byte) *C.struct_msg {
	return (*C.struct_msg)(unsafe.Pointer(&buf[0]))
}
