package p

/*
#cgo CFLAGS: -O2
#cgo darwin LDFLAGS: -framework CoreFoundation
#cgo pkg-config: libusb-1.0
#include <libusb.h>
*/
import "C"

type Context struct {
	ctx *C.libusb_context
}

func (c *Context) Close() {
	C.libusb_exit(c.ctx)
}
