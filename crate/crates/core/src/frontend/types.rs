//! Structural type shapes and static type resolution of expressions.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::scope::ScopeTable;
use super::syntax::{Callee, DeclKind, ExprKind, ExprRef, LitKind, Pos, SyntaxFacts, TypeExpr};
use crate::cnames;

const MAX_DEPTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeShape {
    Scalar(String),
    PointerTo(Box<TypeShape>),
    ArrayOf(Box<TypeShape>, Option<u64>),
    StructOf(Vec<(String, TypeShape)>),
    SliceOf(Box<TypeShape>),
    MapOf,
    Chan,
    Func,
    Interface,
    String,
    UnsafePointer,
    /// Always carries the `C.` qualifier.
    CNamed(String),
    Unknown,
}

impl TypeShape {
    pub fn scalar(name: &str) -> Self {
        TypeShape::Scalar(name.to_string())
    }

    pub fn pointer_to(inner: TypeShape) -> Self {
        TypeShape::PointerTo(Box::new(inner))
    }

    pub fn c_named(member: &str) -> Self {
        TypeShape::CNamed(format!("C.{member}"))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TypeShape::Unknown)
    }

    /// Nesting depth; scalars and leaves are 1.
    pub fn depth(&self) -> usize {
        match self {
            TypeShape::PointerTo(t) | TypeShape::ArrayOf(t, _) | TypeShape::SliceOf(t) => 1 + t.depth(),
            TypeShape::StructOf(fields) => 1 + fields.iter().map(|(_, t)| t.depth()).max().unwrap_or(0),
            _ => 1,
        }
    }
}

impl fmt::Display for TypeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeShape::Scalar(n) | TypeShape::CNamed(n) => f.write_str(n),
            TypeShape::PointerTo(t) => write!(f, "*{t}"),
            TypeShape::ArrayOf(t, Some(n)) => write!(f, "[{n}]{t}"),
            TypeShape::ArrayOf(t, None) => write!(f, "[_]{t}"),
            TypeShape::StructOf(fields) => {
                f.write_str("struct{")?;
                for (i, (name, t)) in fields.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{name} {t}")?;
                }
                f.write_str("}")
            }
            TypeShape::SliceOf(t) => write!(f, "[]{t}"),
            TypeShape::MapOf => f.write_str("map"),
            TypeShape::Chan => f.write_str("chan"),
            TypeShape::Func => f.write_str("func"),
            TypeShape::Interface => f.write_str("interface"),
            TypeShape::String => f.write_str("string"),
            TypeShape::UnsafePointer => f.write_str("unsafe.Pointer"),
            TypeShape::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointerFree {
    Yes,
    No,
    Unknown,
}

/// Whether values of `shape` provably hold no Go pointers.
pub fn pointer_free(shape: &TypeShape) -> PointerFree {
    match shape {
        TypeShape::Scalar(_) => PointerFree::Yes,
        TypeShape::CNamed(name) => {
            let member = name.strip_prefix("C.").unwrap_or(name);
            if cnames::is_c_scalar(member) {
                PointerFree::Yes
            } else {
                PointerFree::Unknown
            }
        }
        TypeShape::ArrayOf(elem, _) => pointer_free(elem),
        TypeShape::StructOf(fields) => {
            let mut verdict = PointerFree::Yes;
            for (_, t) in fields {
                match pointer_free(t) {
                    PointerFree::No => return PointerFree::No,
                    PointerFree::Unknown => verdict = PointerFree::Unknown,
                    PointerFree::Yes => {}
                }
            }
            verdict
        }
        TypeShape::PointerTo(_)
        | TypeShape::SliceOf(_)
        | TypeShape::MapOf
        | TypeShape::Chan
        | TypeShape::Func
        | TypeShape::Interface
        | TypeShape::String
        | TypeShape::UnsafePointer => PointerFree::No,
        TypeShape::Unknown => PointerFree::Unknown,
    }
}

/// Static type of `expr`; `Unknown` whenever any step cannot be resolved.
pub fn resolve_expr_type(expr: &ExprRef, scopes: &ScopeTable, _facts: &SyntaxFacts) -> TypeShape {
    Resolver { scopes }.expr(expr, 0)
}

/// Shape of a written type as seen from `pos`.
pub fn resolve_type_expr(ty: &TypeExpr, scopes: &ScopeTable, pos: Pos) -> TypeShape {
    Resolver { scopes }.type_expr(ty, pos, &mut Vec::new())
}

struct Resolver<'a> {
    scopes: &'a ScopeTable,
}

impl Resolver<'_> {
    fn expr(&self, e: &ExprRef, depth: usize) -> TypeShape {
        if depth > MAX_DEPTH {
            return TypeShape::Unknown;
        }
        let d = depth + 1;
        match &e.kind {
            ExprKind::Ident(name) => self.ident(name, e.location, d),
            ExprKind::AddressOf(inner) => TypeShape::pointer_to(self.expr(inner, d)),
            ExprKind::Deref(inner) => match self.expr(inner, d) {
                TypeShape::PointerTo(t) => *t,
                _ => TypeShape::Unknown,
            },
            ExprKind::IndexOf(inner) => match self.expr(inner, d) {
                TypeShape::ArrayOf(t, _) | TypeShape::SliceOf(t) => *t,
                TypeShape::String => TypeShape::scalar("byte"),
                TypeShape::PointerTo(t) => match *t {
                    TypeShape::ArrayOf(elem, _) => *elem,
                    _ => TypeShape::Unknown,
                },
                _ => TypeShape::Unknown,
            },
            ExprKind::SliceOf(inner) => match self.expr(inner, d) {
                TypeShape::ArrayOf(t, _) | TypeShape::SliceOf(t) => TypeShape::SliceOf(t),
                TypeShape::String => TypeShape::String,
                TypeShape::PointerTo(t) => match *t {
                    TypeShape::ArrayOf(elem, _) => TypeShape::SliceOf(elem),
                    _ => TypeShape::Unknown,
                },
                _ => TypeShape::Unknown,
            },
            ExprKind::FieldOf(base, field) => {
                if let ExprKind::Ident(pkg) = &base.kind {
                    if self.scopes.lookup(pkg, base.location).is_none() {
                        // Package-qualified value such as `C.FOO` or `os.Args`.
                        return TypeShape::Unknown;
                    }
                }
                let base_shape = match self.expr(base, d) {
                    TypeShape::PointerTo(t) => *t,
                    other => other,
                };
                match base_shape {
                    TypeShape::StructOf(fields) => {
                        fields.into_iter().find(|(name, _)| name == field).map(|(_, t)| t).unwrap_or(TypeShape::Unknown)
                    }
                    _ => TypeShape::Unknown,
                }
            }
            ExprKind::Conversion(ty, _) | ExprKind::TypeAssert(ty, _) | ExprKind::Composite(ty) => {
                self.type_expr(ty, e.location, &mut Vec::new())
            }
            ExprKind::Call(callee, args) => self.call(callee, args, e.location),
            ExprKind::Literal(kind) => literal_shape(*kind),
            ExprKind::Other => TypeShape::Unknown,
        }
    }

    fn ident(&self, name: &str, at: Pos, depth: usize) -> TypeShape {
        let Some(hit) = self.scopes.lookup(name, at) else {
            return match name {
                "true" | "false" => TypeShape::scalar("bool"),
                _ => TypeShape::Unknown,
            };
        };
        let decl = hit.decl;
        match decl.kind {
            DeclKind::Type | DeclKind::TypeParam => TypeShape::Unknown,
            DeclKind::Func => TypeShape::Func,
            _ => {
                if let Some(ty) = &decl.type_expr {
                    return self.type_expr(ty, decl.location, &mut Vec::new());
                }
                if hit.reassigned {
                    return TypeShape::Unknown;
                }
                match &decl.init {
                    Some(init) => self.expr(init, depth),
                    None => TypeShape::Unknown,
                }
            }
        }
    }

    fn call(&self, callee: &Callee, args: &[ExprRef], at: Pos) -> TypeShape {
        match callee {
            Callee::Selector { base, member } if base == "C" && self.scopes.lookup(base, at).is_none() => {
                match member.as_str() {
                    "CString" => TypeShape::pointer_to(TypeShape::c_named("char")),
                    "GoString" | "GoStringN" => TypeShape::String,
                    "GoBytes" => TypeShape::SliceOf(Box::new(TypeShape::scalar("byte"))),
                    "CBytes" | "malloc" | "calloc" => TypeShape::UnsafePointer,
                    _ => TypeShape::Unknown,
                }
            }
            Callee::Ident(name) if self.scopes.lookup(name, at).is_none() => match name.as_str() {
                "new" => match args.first().and_then(expr_as_type) {
                    Some(ty) => TypeShape::pointer_to(self.type_expr(&ty, at, &mut Vec::new())),
                    None => TypeShape::pointer_to(TypeShape::Unknown),
                },
                "make" => match args.first().and_then(expr_as_type) {
                    Some(ty) => self.type_expr(&ty, at, &mut Vec::new()),
                    None => TypeShape::Unknown,
                },
                "len" | "cap" | "copy" => TypeShape::scalar("int"),
                _ => TypeShape::Unknown,
            },
            _ => TypeShape::Unknown,
        }
    }

    fn type_expr(&self, ty: &TypeExpr, at: Pos, visiting: &mut Vec<(String, Pos)>) -> TypeShape {
        if visiting.len() > MAX_DEPTH {
            return TypeShape::Unknown;
        }
        match ty {
            TypeExpr::Named(name) => self.named(name, at, visiting),
            TypeExpr::Qualified { package, name } => {
                if package == "C" {
                    TypeShape::c_named(name)
                } else if package == "unsafe" && name == "Pointer" {
                    TypeShape::UnsafePointer
                } else {
                    TypeShape::Unknown
                }
            }
            TypeExpr::Pointer(inner) => TypeShape::pointer_to(self.type_expr(inner, at, visiting)),
            TypeExpr::Array { len, elem } => TypeShape::ArrayOf(Box::new(self.type_expr(elem, at, visiting)), *len),
            TypeExpr::Slice(elem) => TypeShape::SliceOf(Box::new(self.type_expr(elem, at, visiting))),
            TypeExpr::Map => TypeShape::MapOf,
            TypeExpr::Chan => TypeShape::Chan,
            TypeExpr::Func => TypeShape::Func,
            TypeExpr::Interface => TypeShape::Interface,
            TypeExpr::Struct(fields) => {
                TypeShape::StructOf(fields.iter().map(|(n, t)| (n.clone(), self.type_expr(t, at, visiting))).collect())
            }
            TypeExpr::Other(_) => TypeShape::Unknown,
        }
    }

    fn named(&self, name: &str, at: Pos, visiting: &mut Vec<(String, Pos)>) -> TypeShape {
        match self.scopes.lookup(name, at) {
            Some(hit) if hit.decl.kind == DeclKind::Type => {
                let key = (name.to_string(), hit.decl.location);
                if visiting.contains(&key) {
                    return TypeShape::Unknown;
                }
                let Some(underlying) = &hit.decl.type_expr else { return TypeShape::Unknown };
                visiting.push(key);
                let shape = self.type_expr(underlying, hit.decl.location, visiting);
                visiting.pop();
                shape
            }
            Some(_) => TypeShape::Unknown,
            None => builtin_shape(name),
        }
    }
}

fn builtin_shape(name: &str) -> TypeShape {
    match name {
        "string" => TypeShape::String,
        "error" | "any" => TypeShape::Interface,
        "unsafe.Pointer" => TypeShape::UnsafePointer,
        n if cnames::is_go_builtin_type(n) => TypeShape::scalar(n),
        _ => TypeShape::Unknown,
    }
}

fn literal_shape(kind: LitKind) -> TypeShape {
    match kind {
        LitKind::Int => TypeShape::scalar("int"),
        LitKind::Float => TypeShape::scalar("float64"),
        LitKind::Imaginary => TypeShape::scalar("complex128"),
        LitKind::Rune => TypeShape::scalar("rune"),
        LitKind::String => TypeShape::String,
        LitKind::Bool => TypeShape::scalar("bool"),
        LitKind::Nil => TypeShape::Unknown,
    }
}

/// Reads a type written in argument position, as in `new(C.int)`.
fn expr_as_type(e: &ExprRef) -> Option<TypeExpr> {
    match &e.kind {
        ExprKind::Ident(n) => Some(TypeExpr::Named(n.clone())),
        ExprKind::FieldOf(base, member) => match &base.kind {
            ExprKind::Ident(pkg) => Some(TypeExpr::qualified(pkg, member)),
            _ => None,
        },
        ExprKind::Deref(inner) => expr_as_type(inner).map(|t| TypeExpr::Pointer(Box::new(t))),
        _ => None,
    }
}
