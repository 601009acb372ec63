package p

// #cgo linux CPPFLAGS: -D_GNU_SOURCE
// #include <sched.h>
import "C"
