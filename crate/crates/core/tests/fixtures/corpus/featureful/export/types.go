package export

// #include <stdint.h>
import "C"

type Buf struct {
	data *C.uint8_t
	size C.size_t
}

func NewSize(n int) C.size_t {
	return C.size_t(n)
}

func size(b Buf) int { return int(b.size) }
