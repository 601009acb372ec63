package p

// #cgo CFLAGS: -I${SRCDIR}/include -DNDEBUG
// #include "lib.h"
import "C"
