//! Language-agnostic digest of one Go source file.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// 1-based line and byte column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub const START: Pos = Pos { line: 0, col: 0 };

    pub fn new(line: u32, col: u32) -> Self {
        Pos { line, col }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn contains(&self, pos: Pos) -> bool {
        self.start <= pos && pos <= self.end
    }

    pub fn encloses(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScopeId(pub u32);

impl ScopeId {
    pub const PACKAGE: ScopeId = ScopeId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScopeKind {
    Package,
    Func,
    Block,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scope {
    pub id: ScopeId,
    pub parent: Option<ScopeId>,
    pub kind: ScopeKind,
    pub span: Span,
}

/// Type syntax as written in the source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeExpr {
    Named(String),
    Qualified {
        package: String,
        name: String,
    },
    Pointer(Box<TypeExpr>),
    Array {
        len: Option<u64>,
        elem: Box<TypeExpr>,
    },
    Slice(Box<TypeExpr>),
    Map,
    Chan,
    Func,
    Interface,
    Struct(Vec<(String, TypeExpr)>),
    /// Generic instantiations and anything else the resolver does not model.
    Other(String),
}

impl TypeExpr {
    pub fn qualified(package: &str, name: &str) -> Self {
        TypeExpr::Qualified { package: package.to_string(), name: name.to_string() }
    }

    pub fn is_unsafe_pointer(&self) -> bool {
        matches!(self, TypeExpr::Qualified { package, name } if package == "unsafe" && name == "Pointer")
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Named(n) => f.write_str(n),
            TypeExpr::Qualified { package, name } => write!(f, "{package}.{name}"),
            TypeExpr::Pointer(t) => write!(f, "*{t}"),
            TypeExpr::Array { len: Some(n), elem } => write!(f, "[{n}]{elem}"),
            TypeExpr::Array { len: None, elem } => write!(f, "[_]{elem}"),
            TypeExpr::Slice(t) => write!(f, "[]{t}"),
            TypeExpr::Map => f.write_str("map"),
            TypeExpr::Chan => f.write_str("chan"),
            TypeExpr::Func => f.write_str("func"),
            TypeExpr::Interface => f.write_str("interface{}"),
            TypeExpr::Struct(fields) => {
                f.write_str("struct{")?;
                for (i, (name, ty)) in fields.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{name} {ty}")?;
                }
                f.write_str("}")
            }
            TypeExpr::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LitKind {
    Int,
    Float,
    Imaginary,
    Rune,
    String,
    Bool,
    Nil,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Callee {
    Ident(String),
    Selector {
        base: String,
        member: String,
    },
    /// Method calls on non-identifier operands, closures, indexed funcs.
    Other,
}

impl Callee {
    pub fn selector(&self) -> Option<(&str, &str)> {
        match self {
            Callee::Selector { base, member } => Some((base, member)),
            _ => None,
        }
    }

    /// Member name when the callee is `C.member`.
    pub fn c_member(&self) -> Option<&str> {
        match self.selector() {
            Some(("C", member)) => Some(member),
            _ => None,
        }
    }
}

impl fmt::Display for Callee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Callee::Ident(n) => f.write_str(n),
            Callee::Selector { base, member } => write!(f, "{base}.{member}"),
            Callee::Other => f.write_str("<expr>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExprKind {
    Ident(String),
    AddressOf(Box<ExprRef>),
    Deref(Box<ExprRef>),
    IndexOf(Box<ExprRef>),
    SliceOf(Box<ExprRef>),
    FieldOf(Box<ExprRef>, String),
    Conversion(TypeExpr, Box<ExprRef>),
    TypeAssert(TypeExpr, Box<ExprRef>),
    Composite(TypeExpr),
    Call(Callee, Vec<ExprRef>),
    Literal(LitKind),
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExprRef {
    pub kind: ExprKind,
    pub text: String,
    pub location: Pos,
}

impl ExprRef {
    /// Strips `unsafe.Pointer(...)` and returns the operand.
    pub fn unsafe_pointer_operand(&self) -> Option<&ExprRef> {
        match &self.kind {
            ExprKind::Conversion(target, inner) if target.is_unsafe_pointer() => Some(inner),
            _ => None,
        }
    }

    pub fn is_conversion_or_call(&self) -> bool {
        matches!(self.kind, ExprKind::Conversion(..) | ExprKind::Call(..))
    }

    /// Visits this expression and every sub-expression.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a ExprRef)) {
        visit(self);
        match &self.kind {
            ExprKind::AddressOf(e)
            | ExprKind::Deref(e)
            | ExprKind::IndexOf(e)
            | ExprKind::SliceOf(e)
            | ExprKind::FieldOf(e, _)
            | ExprKind::Conversion(_, e)
            | ExprKind::TypeAssert(_, e) => e.walk(visit),
            ExprKind::Call(_, args) => args.iter().for_each(|a| a.walk(visit)),
            ExprKind::Ident(_) | ExprKind::Composite(_) | ExprKind::Literal(_) | ExprKind::Other => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallSite {
    pub location: Pos,
    pub callee: Callee,
    pub args: Vec<ExprRef>,
    /// Directly under a `defer` statement.
    pub deferred: bool,
    pub scope: ScopeId,
    /// Index into `SyntaxFacts::func_decls` of the enclosing declared function.
    pub func: Option<usize>,
    pub text: String,
}

/// Where a `pkg.member` selector appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SelectorRole {
    Callee,
    Value,
    Type,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectorRef {
    pub base: String,
    pub member: String,
    pub role: SelectorRole,
    pub location: Pos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeclKind {
    Var,
    ShortVar,
    Const,
    Param,
    Result,
    Type,
    TypeParam,
    Func,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decl {
    pub name: String,
    pub kind: DeclKind,
    pub type_expr: Option<TypeExpr>,
    pub init: Option<ExprRef>,
    pub scope: ScopeId,
    pub location: Pos,
    /// Uses at or after this position may refer to the declaration.
    pub visible_from: Pos,
}

impl Decl {
    pub fn is_value(&self) -> bool {
        !matches!(self.kind, DeclKind::Type | DeclKind::TypeParam)
    }
}

/// `x = e` (or `x op= e`, `for x = range`) on a plain identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub target: String,
    pub value: Option<ExprRef>,
    pub scope: ScopeId,
    pub location: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: Option<String>,
    pub type_expr: TypeExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncDecl {
    pub name: String,
    pub receiver: Option<TypeExpr>,
    pub location: Pos,
    pub end_line: u32,
    /// Index into `SyntaxFacts::comment_groups`.
    pub doc: Option<usize>,
    pub params: Vec<Param>,
    pub results: Vec<TypeExpr>,
    pub body_scope: Option<ScopeId>,
    /// All statements in the body, nested ones included.
    pub statement_count: usize,
    pub return_values: Vec<ExprRef>,
    /// Assigns through `*p`, `p.f` or `p[i]` where `p` is a parameter.
    pub writes_through_param: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comment {
    pub raw: String,
    pub start: Pos,
    pub end_line: u32,
}

impl Comment {
    pub fn is_line_comment(&self) -> bool {
        self.raw.starts_with("//")
    }
}

/// Adjacent comments with no blank line or code between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentGroup {
    pub comments: Vec<Comment>,
}

impl CommentGroup {
    pub fn start(&self) -> Pos {
        self.comments.first().map(|c| c.start).unwrap_or_default()
    }

    pub fn end_line(&self) -> u32 {
        self.comments.last().map(|c| c.end_line).unwrap_or(0)
    }

    /// Content lines with comment markers removed, each paired with its file line.
    pub fn lines(&self) -> Vec<(u32, String)> {
        let mut out = Vec::new();
        for c in &self.comments {
            if let Some(rest) = c.raw.strip_prefix("//") {
                out.push((c.start.line, rest.to_string()));
            } else {
                let body = c.raw.strip_prefix("/*").unwrap_or(&c.raw);
                let body = body.strip_suffix("*/").unwrap_or(body);
                for (i, line) in body.split('\n').enumerate() {
                    out.push((c.start.line + i as u32, line.trim_end_matches('\r').to_string()));
                }
            }
        }
        out
    }

    /// Comment text with markers removed, one source line per output line.
    pub fn text(&self) -> String {
        self.lines().into_iter().map(|(_, l)| l).collect::<Vec<_>>().join("\n")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Import {
    pub path: String,
    pub alias: Option<String>,
    pub location: Pos,
    /// Comment group immediately preceding the import, by index.
    pub comment: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntaxFacts {
    pub file_path: PathBuf,
    pub package_name: String,
    pub line_count: u32,
    pub imports: Vec<Import>,
    pub func_decls: Vec<FuncDecl>,
    pub calls: Vec<CallSite>,
    /// Every conversion expression (`T(x)`, `(*T)(x)`, `unsafe.Pointer(x)`, ...).
    pub conversions: Vec<ExprRef>,
    pub selectors: Vec<SelectorRef>,
    pub decls: Vec<Decl>,
    pub assignments: Vec<Assignment>,
    pub scopes: Vec<Scope>,
    pub comment_groups: Vec<CommentGroup>,
    pub parse_ok: bool,
    pub parse_errors: Vec<ParseDiagnostic>,
    #[serde(skip)]
    pub source: String,
}

impl SyntaxFacts {
    pub fn empty(file_path: PathBuf) -> Self {
        SyntaxFacts {
            file_path,
            package_name: String::new(),
            line_count: 0,
            imports: Vec::new(),
            func_decls: Vec::new(),
            calls: Vec::new(),
            conversions: Vec::new(),
            selectors: Vec::new(),
            decls: Vec::new(),
            assignments: Vec::new(),
            scopes: Vec::new(),
            comment_groups: Vec::new(),
            parse_ok: false,
            parse_errors: Vec::new(),
            source: String::new(),
        }
    }

    pub fn imports_path(&self, path: &str) -> bool {
        self.imports.iter().any(|i| i.path == path)
    }

    /// Source line by 1-based number, without the trailing newline.
    pub fn line_text(&self, line: u32) -> &str {
        if line == 0 {
            return "";
        }
        self.source.lines().nth(line as usize - 1).unwrap_or("")
    }

    pub fn scope(&self, id: ScopeId) -> &Scope {
        &self.scopes[id.index()]
    }
}
