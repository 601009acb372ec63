package main

/*
#include <stdio.h>
void testPtr(void *p) { printf("%d\n", *(int *)p); }
*/
import "C"
import "unsafe"

func main() {
	var a C.int = 42
	C.testPtr(unsafe.Pointer(&a))
}
