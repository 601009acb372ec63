package p

/*
#define BUFSIZE 512
*/
import "C"

var limit = C.BUFSIZE
