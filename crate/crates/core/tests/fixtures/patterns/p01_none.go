package p

import "C"

func Hello() string { return "hi" }
