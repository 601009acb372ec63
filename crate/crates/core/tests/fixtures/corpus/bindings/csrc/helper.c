#include <stdlib.h>

void use(void *p) {
	(void)p;
}
