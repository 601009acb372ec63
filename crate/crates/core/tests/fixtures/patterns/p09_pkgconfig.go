package p

// #cgo pkg-config: gtk+-3.0
// #include <gtk/gtk.h>
import "C"

func Init() {
	C.gtk_init(nil, nil)
}
