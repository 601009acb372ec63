void use(void *p);
