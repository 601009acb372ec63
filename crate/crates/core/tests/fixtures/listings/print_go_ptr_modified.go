package main

/*
#include <stdio.h>
void testPtr(int *p) { printf("%d\n", *p); }
*/
import "C"

func main() {
	var a C.int = 42
	C.testPtr((*C.int)(&a))
}
