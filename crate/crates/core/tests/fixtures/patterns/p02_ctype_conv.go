package p

// #include <stdint.h>
import "C"

func Width(n int) C.int {
	return C.int(n)
}
