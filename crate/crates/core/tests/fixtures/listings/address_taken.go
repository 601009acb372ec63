package main

/*
void testPtr(void *p) {}
*/
import "C"
import "unsafe"

func send(b []byte) {
	var p *byte
	p = &b[0]
	C.testPtr(unsafe.Pointer(p))
}

func main() {
	send(make([]byte, 8))
}
