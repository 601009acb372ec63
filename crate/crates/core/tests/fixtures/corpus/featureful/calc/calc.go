package calc

// #cgo CFLAGS: -O2
// #cgo LDFLAGS: -lm
// #include <math.h>
import "C"

func Sqrt(x float64) float64 {
	return float64(C.sqrt(C.double(x)))
}

func Pow(x, y float64) float64 {
	return float64(C.pow(C.double(x), C.double(y)))
}
