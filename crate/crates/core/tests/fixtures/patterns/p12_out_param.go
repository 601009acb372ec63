package p

// #include "dm.h"
import "C"

func DriverVersion(out *string) {
	var buf [128]C.char
	C.dm_task_get_driver_version(nil, &buf[0], 128)
	*out = C.GoString(&buf[0])
}
