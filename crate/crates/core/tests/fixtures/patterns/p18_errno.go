package p

// #include <errno.h>
import "C"

func Busy(code int) bool {
	return code == C.EBUSY
}
