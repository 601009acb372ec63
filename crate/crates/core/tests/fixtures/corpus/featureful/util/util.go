package util

/*
#define LIMIT 16
int counter;
*/
import "C"

func Limit() int { return int(C.LIMIT) + int(C.counter) }

func Bump() { C.counter++ }
