package p

import "C"

//export Callback
func Callback(x int) int {
	return x + 1
}
