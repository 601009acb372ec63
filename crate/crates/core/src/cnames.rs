//! Fixed name tables for the `C` pseudo-package.

/// Members of `C` that name a type, so `C.name(x)` is a conversion.
pub const C_TYPE_NAMES: &[&str] = &[
    "char",
    "schar",
    "uchar",
    "short",
    "ushort",
    "int",
    "uint",
    "long",
    "ulong",
    "longlong",
    "ulonglong",
    "float",
    "double",
    "complexfloat",
    "complexdouble",
    "size_t",
];

/// Prefixes that also name C types (`C.struct_stat`, `C.enum_mode`).
pub const C_TYPE_PREFIXES: &[&str] = &["struct_", "union_", "enum_"];

/// cgo helper functions that are calls, not conversions.
pub const CGO_BUILTIN_FUNCS: &[&str] =
    &["CString", "CBytes", "GoString", "GoStringN", "GoBytes", "malloc", "calloc", "free"];

/// Helpers that copy data across the language boundary.
pub const STD_CAST_FUNCS: &[&str] = &["CString", "CBytes", "GoString", "GoStringN", "GoBytes"];

/// Calls whose result is C heap memory.
pub const C_ALLOCATORS: &[&str] = &["malloc", "calloc", "CBytes"];

/// C names whose Go mirror can never hold a Go pointer.
pub const C_SCALAR_NAMES: &[&str] = &[
    "char",
    "schar",
    "uchar",
    "short",
    "ushort",
    "int",
    "uint",
    "long",
    "ulong",
    "longlong",
    "ulonglong",
    "float",
    "double",
    "complexfloat",
    "complexdouble",
    "size_t",
    "ssize_t",
    "ptrdiff_t",
    "intptr_t",
    "uintptr_t",
    "int8_t",
    "int16_t",
    "int32_t",
    "int64_t",
    "uint8_t",
    "uint16_t",
    "uint32_t",
    "uint64_t",
    "void",
    "_Bool",
    "bool",
];

/// Go predeclared types usable as conversion functions.
pub const GO_BUILTIN_TYPES: &[&str] = &[
    "bool",
    "byte",
    "rune",
    "int",
    "int8",
    "int16",
    "int32",
    "int64",
    "uint",
    "uint8",
    "uint16",
    "uint32",
    "uint64",
    "uintptr",
    "float32",
    "float64",
    "complex64",
    "complex128",
    "string",
    "error",
    "any",
];

pub fn is_c_type_name(member: &str) -> bool {
    C_TYPE_NAMES.contains(&member) || C_TYPE_PREFIXES.iter().any(|p| member.starts_with(p) && member.len() > p.len())
}

pub fn is_cgo_builtin(member: &str) -> bool {
    CGO_BUILTIN_FUNCS.contains(&member)
}

/// `true` when a `C.<member>` type cannot contain Go pointers.
pub fn is_c_scalar(member: &str) -> bool {
    C_SCALAR_NAMES.contains(&member) || (member.starts_with("enum_") && member.len() > 5)
}

pub fn is_go_builtin_type(name: &str) -> bool {
    GO_BUILTIN_TYPES.contains(&name)
}
