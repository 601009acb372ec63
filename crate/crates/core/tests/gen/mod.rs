//! Random single-package cgo programs and a brute-force declaration
//! interpreter that knows the exact type of every expression it generated.

#![allow(dead_code)]

use std::collections::BTreeSet;

use cgoscope_core::frontend::{build_unit_tables, parse_source, resolve_expr_type, SyntaxFacts};
use cgoscope_core::{PointerFree, TypeShape};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const SCALARS: &[&str] = &["int", "int32", "uint8", "byte", "float64", "bool", "uintptr", "uint64"];
const C_SCALARS: &[&str] = &["int", "char", "double", "size_t", "long"];
const C_STRUCTS: &[&str] = &["struct_stat", "struct_msg"];
const LOCAL_NAMES: &[&str] = &["a", "b", "c", "p", "q", "x", "buf", "g0", "g1"];
const GLOBAL_NAMES: &[&str] = &["g0", "g1", "g2"];
const PARAM_NAMES: &[&str] = &["in", "out", "n"];

#[derive(Clone, Debug, PartialEq)]
pub enum GTy {
    Scalar(&'static str),
    CScalar(&'static str),
    CStruct(&'static str),
    Ptr(Box<GTy>),
    Arr(u64, Box<GTy>),
    Slice(Box<GTy>),
    Str,
    Map,
    Iface,
    UnsafePtr,
    Struct(Vec<(String, GTy)>),
    Named(usize),
}

fn ptr(t: GTy) -> GTy {
    GTy::Ptr(Box::new(t))
}

#[derive(Clone, Debug)]
pub enum Expr {
    Var(String),
    AddrOf(Box<Expr>),
    Field(Box<Expr>, String),
    Index(Box<Expr>),
    Deref(Box<Expr>),
    New(GTy),
    Composite(usize),
    IntLit,
    FloatLit,
    StrLit,
    BoolLit,
    CString,
    Malloc,
    UnsafeConv(Box<Expr>),
    PtrCast(GTy, Box<Expr>),
    CConv(&'static str, Box<Expr>),
    MakeSlice(GTy),
}

#[derive(Clone, Debug)]
pub enum Stmt {
    Var(String, GTy, Option<Expr>),
    Short(String, Expr),
    Assign(String, Expr),
    Block(Vec<Stmt>),
    Use(Vec<Expr>),
}

#[derive(Clone, Debug)]
pub struct Func {
    pub name: String,
    pub params: Vec<(String, GTy)>,
    pub body: Vec<Stmt>,
}

#[derive(Clone, Debug)]
pub struct Program {
    pub types: Vec<(String, GTy)>,
    pub globals: Vec<(String, GTy, Option<Expr>)>,
    pub funcs: Vec<Func>,
    /// Types and globals go to a second file of the same package.
    pub split: bool,
}

// ---------------------------------------------------------------- oracle

/// One variable binding as the interpreter sees it.
#[derive(Clone, Debug)]
pub struct Binding {
    name: String,
    ty: GTy,
    /// Every value stored so far came from a C allocation.
    c_memory: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Env {
    scopes: Vec<Vec<Binding>>,
}

impl Env {
    fn lookup(&self, name: &str) -> Option<&Binding> {
        self.scopes.iter().rev().find_map(|s| s.iter().rev().find(|b| b.name == name))
    }

    fn lookup_mut(&mut self, name: &str) -> Option<&mut Binding> {
        self.scopes.iter_mut().rev().find_map(|s| s.iter_mut().rev().find(|b| b.name == name))
    }

    fn declare(&mut self, name: &str, ty: GTy, c_memory: bool) {
        self.scopes.last_mut().expect("open scope").push(Binding { name: name.to_string(), ty, c_memory });
    }

    fn declared_here(&self, name: &str) -> bool {
        self.scopes.last().is_some_and(|s| s.iter().any(|b| b.name == name))
    }

    fn visible(&self) -> Vec<Binding> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in self.scopes.iter().rev() {
            for b in s.iter().rev() {
                if seen.insert(b.name.clone()) {
                    out.push(b.clone());
                }
            }
        }
        out.sort_by(|a, b| a.name.cmp(&b.name));
        out
    }
}

/// Ground truth for one `C.use(...)` argument.
#[derive(Clone, Debug)]
pub struct ArgTruth {
    pub expr: Expr,
    pub ty: GTy,
    /// For `unsafe.Pointer(inner)` arguments: the memory `inner` points at is provably Go-pointer free.
    pub cast_target_pointer_free: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct UseTruth {
    pub args: Vec<ArgTruth>,
}

pub struct Oracle<'p> {
    pub program: &'p Program,
}

impl Oracle<'_> {
    pub fn underlying(&self, t: &GTy) -> GTy {
        let mut cur = t.clone();
        for _ in 0..64 {
            match cur {
                GTy::Named(i) => cur = self.program.types[i].1.clone(),
                other => return other,
            }
        }
        cur
    }

    pub fn type_of(&self, e: &Expr, env: &Env) -> Option<GTy> {
        Some(match e {
            Expr::Var(n) => env.lookup(n)?.ty.clone(),
            Expr::AddrOf(inner) => ptr(self.type_of(inner, env)?),
            Expr::Field(base, f) => {
                let mut t = self.underlying(&self.type_of(base, env)?);
                if let GTy::Ptr(inner) = t {
                    t = self.underlying(&inner);
                }
                match t {
                    GTy::Struct(fields) => fields.into_iter().find(|(n, _)| n == f)?.1,
                    _ => return None,
                }
            }
            Expr::Index(base) => match self.underlying(&self.type_of(base, env)?) {
                GTy::Arr(_, elem) | GTy::Slice(elem) => *elem,
                GTy::Str => GTy::Scalar("byte"),
                GTy::Ptr(inner) => match self.underlying(&inner) {
                    GTy::Arr(_, elem) => *elem,
                    _ => return None,
                },
                _ => return None,
            },
            Expr::Deref(inner) => match self.underlying(&self.type_of(inner, env)?) {
                GTy::Ptr(t) => *t,
                _ => return None,
            },
            Expr::New(t) => ptr(t.clone()),
            Expr::Composite(i) => GTy::Named(*i),
            Expr::IntLit => GTy::Scalar("int"),
            Expr::FloatLit => GTy::Scalar("float64"),
            Expr::StrLit => GTy::Str,
            Expr::BoolLit => GTy::Scalar("bool"),
            Expr::CString => ptr(GTy::CScalar("char")),
            Expr::Malloc | Expr::UnsafeConv(_) => GTy::UnsafePtr,
            Expr::PtrCast(t, _) => ptr(t.clone()),
            Expr::CConv(c, _) => GTy::CScalar(c),
            Expr::MakeSlice(t) => GTy::Slice(Box::new(t.clone())),
        })
    }

    fn is_c_memory(&self, e: &Expr, env: &Env) -> bool {
        match e {
            Expr::Malloc => true,
            Expr::Var(n) => env.lookup(n).is_some_and(|b| b.c_memory),
            _ => false,
        }
    }

    /// Whether values of `t` can hold Go pointers, decided on declarations alone.
    pub fn pointer_free(&self, t: &GTy) -> PointerFree {
        self.pf(t, &mut Vec::new())
    }

    fn pf(&self, t: &GTy, visiting: &mut Vec<usize>) -> PointerFree {
        match t {
            GTy::Scalar(_) | GTy::CScalar(_) => PointerFree::Yes,
            GTy::CStruct(_) => PointerFree::Unknown,
            GTy::Ptr(_) | GTy::Slice(_) | GTy::Str | GTy::Map | GTy::Iface | GTy::UnsafePtr => PointerFree::No,
            GTy::Arr(_, elem) => self.pf(elem, visiting),
            GTy::Struct(fields) => {
                let verdicts: Vec<_> = fields.iter().map(|(_, f)| self.pf(f, visiting)).collect();
                if verdicts.contains(&PointerFree::No) {
                    PointerFree::No
                } else if verdicts.contains(&PointerFree::Unknown) {
                    PointerFree::Unknown
                } else {
                    PointerFree::Yes
                }
            }
            GTy::Named(i) => {
                if visiting.contains(i) {
                    return PointerFree::Unknown;
                }
                visiting.push(*i);
                let v = self.pf(&self.program.types[*i].1, visiting);
                visiting.pop();
                v
            }
        }
    }

    fn arg_truth(&self, e: &Expr, env: &Env) -> ArgTruth {
        let ty = self.type_of(e, env).expect("generated expressions are well typed");
        let cast_target_pointer_free = match e {
            Expr::UnsafeConv(inner) => Some(match inner.as_ref() {
                Expr::AddrOf(target) => {
                    self.pointer_free(&self.type_of(target, env).expect("typed")) == PointerFree::Yes
                }
                other if self.is_c_memory(other, env) => true,
                other => match self.underlying(&self.type_of(other, env).expect("typed")) {
                    GTy::Ptr(t) => self.pointer_free(&t) == PointerFree::Yes,
                    _ => false,
                },
            }),
            _ => None,
        };
        ArgTruth { expr: e.clone(), ty, cast_target_pointer_free }
    }

    /// Replays every declaration and returns the truth for each use, in source order.
    pub fn interpret(&self) -> Vec<UseTruth> {
        let mut env = Env::default();
        env.scopes.push(Vec::new());
        for (name, ty, init) in &self.program.globals {
            let c_mem = init.as_ref().is_some_and(|e| matches!(e, Expr::Malloc));
            env.declare(name, ty.clone(), c_mem);
        }
        let mut out = Vec::new();
        for f in &self.program.funcs {
            env.scopes.push(Vec::new());
            for (n, t) in &f.params {
                env.declare(n, t.clone(), false);
            }
            self.stmts(&f.body, &mut env, &mut out);
            env.scopes.pop();
        }
        out
    }

    fn stmts(&self, body: &[Stmt], env: &mut Env, out: &mut Vec<UseTruth>) {
        for s in body {
            match s {
                Stmt::Var(n, t, init) => {
                    let c_mem = init.as_ref().is_some_and(|e| self.is_c_memory(e, env));
                    env.declare(n, t.clone(), c_mem);
                }
                Stmt::Short(n, e) => {
                    let t = self.type_of(e, env).expect("typed");
                    let c_mem = self.is_c_memory(e, env);
                    env.declare(n, t, c_mem);
                }
                Stmt::Assign(n, e) => {
                    let c_mem = self.is_c_memory(e, env);
                    let b = env.lookup_mut(n).expect("assigned variable is declared");
                    b.c_memory = b.c_memory && c_mem;
                }
                Stmt::Block(inner) => {
                    env.scopes.push(Vec::new());
                    self.stmts(inner, env, out);
                    env.scopes.pop();
                }
                Stmt::Use(args) => out.push(UseTruth { args: args.iter().map(|a| self.arg_truth(a, env)).collect() }),
            }
        }
    }

    /// The shape a sound resolver may report for `t`; `Unknown` past `depth`.
    pub fn expected_shape(&self, t: &GTy, depth: usize) -> TypeShape {
        if depth == 0 {
            return TypeShape::Unknown;
        }
        let d = depth - 1;
        match t {
            GTy::Scalar(n) => TypeShape::scalar(n),
            GTy::CScalar(n) | GTy::CStruct(n) => TypeShape::c_named(n),
            GTy::Ptr(t) => TypeShape::pointer_to(self.expected_shape(t, d)),
            GTy::Arr(n, t) => TypeShape::ArrayOf(Box::new(self.expected_shape(t, d)), Some(*n)),
            GTy::Slice(t) => TypeShape::SliceOf(Box::new(self.expected_shape(t, d))),
            GTy::Str => TypeShape::String,
            GTy::Map => TypeShape::MapOf,
            GTy::Iface => TypeShape::Interface,
            GTy::UnsafePtr => TypeShape::UnsafePointer,
            GTy::Struct(fields) => {
                TypeShape::StructOf(fields.iter().map(|(n, t)| (n.clone(), self.expected_shape(t, d))).collect())
            }
            GTy::Named(i) => self.expected_shape(&self.program.types[*i].1, depth),
        }
    }
}

/// `resolved` claims nothing that contradicts `truth`; `Unknown` on either side matches anything.
pub fn compatible(resolved: &TypeShape, truth: &TypeShape) -> bool {
    use TypeShape as T;
    match (resolved, truth) {
        (T::Unknown, _) | (_, T::Unknown) => true,
        (T::Scalar(a), T::Scalar(b)) | (T::CNamed(a), T::CNamed(b)) => a == b,
        (T::PointerTo(a), T::PointerTo(b)) | (T::SliceOf(a), T::SliceOf(b)) => compatible(a, b),
        (T::ArrayOf(a, n), T::ArrayOf(b, m)) => (n.is_none() || n == m) && compatible(a, b),
        (T::StructOf(a), T::StructOf(b)) => {
            a.len() == b.len() && a.iter().zip(b).all(|((na, ta), (nb, tb))| na == nb && compatible(ta, tb))
        }
        (a, b) => a == b,
    }
}

// ------------------------------------------------------------- generator

struct Gen<'r> {
    rng: &'r mut StdRng,
    types: Vec<(String, GTy)>,
}

impl Gen<'_> {
    fn oracle<'p>(&self, program: &'p Program) -> Oracle<'p> {
        Oracle { program }
    }

    fn leaf_type(&mut self) -> GTy {
        match self.rng.gen_range(0..10) {
            0..=3 => GTy::Scalar(SCALARS.choose(self.rng).unwrap()),
            4..=5 => GTy::CScalar(C_SCALARS.choose(self.rng).unwrap()),
            6 => GTy::CStruct(C_STRUCTS.choose(self.rng).unwrap()),
            7 => GTy::Str,
            8 => [GTy::Map, GTy::Iface, GTy::UnsafePtr].choose(self.rng).unwrap().clone(),
            _ if !self.types.is_empty() => GTy::Named(self.rng.gen_range(0..self.types.len())),
            _ => GTy::Scalar("int"),
        }
    }

    /// A type that may mention named types `< limit`, and `self_ref` only behind a pointer or slice.
    fn gen_type(&mut self, depth: usize, limit: usize, self_ref: Option<usize>) -> GTy {
        let named = |g: &mut Self| if limit == 0 { GTy::Scalar("int") } else { GTy::Named(g.rng.gen_range(0..limit)) };
        if depth == 0 {
            return match self.rng.gen_range(0..8) {
                0..=3 => GTy::Scalar(SCALARS.choose(self.rng).unwrap()),
                4..=5 => GTy::CScalar(C_SCALARS.choose(self.rng).unwrap()),
                6 => named(self),
                _ => GTy::Str,
            };
        }
        match self.rng.gen_range(0..14) {
            0..=3 => GTy::Scalar(SCALARS.choose(self.rng).unwrap()),
            4 => GTy::CScalar(C_SCALARS.choose(self.rng).unwrap()),
            5 => GTy::CStruct(C_STRUCTS.choose(self.rng).unwrap()),
            6 => match self_ref {
                Some(i) if self.rng.gen_bool(0.5) => ptr(GTy::Named(i)),
                _ => ptr(self.gen_type(depth - 1, limit, None)),
            },
            7 => GTy::Arr(self.rng.gen_range(1..5), Box::new(self.gen_type(depth - 1, limit, None))),
            8 => match self_ref {
                Some(i) if self.rng.gen_bool(0.3) => GTy::Slice(Box::new(GTy::Named(i))),
                _ => GTy::Slice(Box::new(self.gen_type(depth - 1, limit, None))),
            },
            9 => [GTy::Str, GTy::Map, GTy::Iface, GTy::UnsafePtr].choose(self.rng).unwrap().clone(),
            10 if depth > 1 => {
                let n = self.rng.gen_range(1..4);
                GTy::Struct((0..n).map(|k| (format!("f{k}"), self.gen_type(depth - 1, limit, self_ref))).collect())
            }
            _ => named(self),
        }
    }

    fn gen_type_decls(&mut self) {
        let count = self.rng.gen_range(0..5);
        for i in 0..count {
            let underlying = if self.rng.gen_bool(0.7) {
                let n = self.rng.gen_range(1..5);
                GTy::Struct((0..n).map(|k| (format!("f{k}"), self.gen_type(2, i, Some(i)))).collect())
            } else {
                self.gen_type(2, i, None)
            };
            self.types.push((format!("t{i}"), underlying));
        }
    }

    fn newable(t: &GTy) -> bool {
        match t {
            GTy::Scalar(_) | GTy::CScalar(_) | GTy::CStruct(_) | GTy::Named(_) => true,
            GTy::Ptr(inner) => Self::newable(inner),
            _ => false,
        }
    }

    /// An addressable expression rooted at a visible variable.
    fn addressable(&mut self, program: &Program, env: &Env) -> Option<Expr> {
        let vars = env.visible();
        let root = vars.choose(self.rng)?;
        let oracle = self.oracle(program);
        let mut e = Expr::Var(root.name.clone());
        for _ in 0..self.rng.gen_range(0..3) {
            let t = oracle.underlying(&oracle.type_of(&e, env)?);
            let next = match t {
                GTy::Struct(fields) => {
                    let (f, _) = fields.choose(self.rng)?;
                    Expr::Field(Box::new(e.clone()), f.clone())
                }
                GTy::Arr(..) | GTy::Slice(_) => Expr::Index(Box::new(e.clone())),
                GTy::Ptr(inner) => match oracle.underlying(&inner) {
                    GTy::Struct(fields) => {
                        let (f, _) = fields.choose(self.rng)?;
                        Expr::Field(Box::new(e.clone()), f.clone())
                    }
                    GTy::Arr(..) => Expr::Index(Box::new(e.clone())),
                    _ => Expr::Deref(Box::new(e.clone())),
                },
                _ => break,
            };
            e = next;
        }
        Some(e)
    }

    /// An expression of some pointer type (typed pointer or unsafe.Pointer).
    fn pointer_expr(&mut self, program: &Program, env: &Env) -> Expr {
        let oracle = self.oracle(program);
        let ptr_vars: Vec<String> = env
            .visible()
            .into_iter()
            .filter(|b| matches!(oracle.underlying(&b.ty), GTy::Ptr(_) | GTy::UnsafePtr))
            .map(|b| b.name)
            .collect();
        match self.rng.gen_range(0..6) {
            0 | 1 if !ptr_vars.is_empty() => Expr::Var(ptr_vars.choose(self.rng).unwrap().clone()),
            2 => Expr::CString,
            3 => Expr::Malloc,
            4 => {
                let t = self.leaf_type();
                if Self::newable(&t) {
                    Expr::New(t)
                } else {
                    Expr::New(GTy::Scalar("int"))
                }
            }
            _ => match self.addressable(program, env) {
                Some(a) => Expr::AddrOf(Box::new(a)),
                None => Expr::CString,
            },
        }
    }

    fn value_expr(&mut self, program: &Program, env: &Env) -> Expr {
        match self.rng.gen_range(0..14) {
            0 => Expr::IntLit,
            1 => Expr::FloatLit,
            2 => Expr::StrLit,
            3 => Expr::BoolLit,
            4 => Expr::CConv(C_SCALARS.choose(self.rng).unwrap(), Box::new(Expr::IntLit)),
            5 if !self.types.is_empty() => Expr::Composite(self.rng.gen_range(0..self.types.len())),
            6 => Expr::MakeSlice(self.leaf_type()),
            7 => {
                let target = self.leaf_type();
                if Self::newable(&target) {
                    let inner = self.pointer_expr(program, env);
                    let inner = if matches!(inner, Expr::Malloc) { inner } else { Expr::UnsafeConv(Box::new(inner)) };
                    Expr::PtrCast(target, Box::new(inner))
                } else {
                    Expr::IntLit
                }
            }
            8 => Expr::UnsafeConv(Box::new(self.pointer_expr(program, env))),
            9 | 10 => self.pointer_expr(program, env),
            _ => self.addressable(program, env).unwrap_or(Expr::IntLit),
        }
    }

    /// An expression of exactly type `t`, when one is easy to build.
    fn expr_of_type(&mut self, t: &GTy, program: &Program, env: &Env) -> Option<Expr> {
        let oracle = self.oracle(program);
        let same: Vec<String> = env.visible().into_iter().filter(|b| &b.ty == t).map(|b| b.name).collect();
        if !same.is_empty() && self.rng.gen_bool(0.4) {
            return Some(Expr::Var(same.choose(self.rng).unwrap().clone()));
        }
        match t {
            GTy::Scalar("bool") => Some(Expr::BoolLit),
            GTy::Scalar(_) => Some(Expr::IntLit),
            GTy::CScalar(c) => Some(Expr::CConv(c, Box::new(Expr::IntLit))),
            GTy::Str => Some(Expr::StrLit),
            GTy::UnsafePtr => Some(if self.rng.gen_bool(0.5) {
                Expr::Malloc
            } else {
                Expr::UnsafeConv(Box::new(self.pointer_expr(program, env)))
            }),
            GTy::Slice(elem) => Some(Expr::MakeSlice((**elem).clone())),
            GTy::Named(i) if matches!(oracle.underlying(t), GTy::Struct(_) | GTy::Arr(..)) => Some(Expr::Composite(*i)),
            GTy::Ptr(inner) => {
                let targets: Vec<Expr> = (0..4)
                    .filter_map(|_| self.addressable(program, env))
                    .filter(|a| oracle.type_of(a, env).as_ref() == Some(inner))
                    .collect();
                if let Some(a) = targets.first() {
                    Some(Expr::AddrOf(Box::new(a.clone())))
                } else if Self::newable(inner) {
                    Some(Expr::New((**inner).clone()))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn arg(&mut self, program: &Program, env: &Env) -> Expr {
        match self.rng.gen_range(0..10) {
            0..=2 => match self.addressable(program, env) {
                Some(a) => Expr::UnsafeConv(Box::new(Expr::AddrOf(Box::new(a)))),
                None => Expr::UnsafeConv(Box::new(Expr::Malloc)),
            },
            3..=5 => Expr::UnsafeConv(Box::new(self.pointer_expr(program, env))),
            6 | 7 => self.pointer_expr(program, env),
            _ => self.value_expr(program, env),
        }
    }

    fn fresh_name(&mut self, env: &Env) -> String {
        let free: Vec<&&str> = LOCAL_NAMES.iter().filter(|n| !env.declared_here(n)).collect();
        match free.choose(self.rng) {
            Some(n) => n.to_string(),
            None => format!("v{}", self.rng.gen_range(100..1000)),
        }
    }

    fn stmts(&mut self, program: &Program, env: &mut Env, depth: usize) -> Vec<Stmt> {
        let oracle_types = |g: &Self, e: &Expr, env: &Env| g.oracle(program).type_of(e, env);
        let count = self.rng.gen_range(2..9);
        let mut out = Vec::new();
        for _ in 0..count {
            let s = match self.rng.gen_range(0..12) {
                0..=2 => {
                    let name = self.fresh_name(env);
                    let t = if self.rng.gen_bool(0.3) {
                        let inner = self.leaf_type();
                        ptr(inner)
                    } else {
                        self.leaf_type()
                    };
                    let init = if self.rng.gen_bool(0.5) { self.expr_of_type(&t, program, env) } else { None };
                    let c_mem = matches!(init, Some(Expr::Malloc));
                    env.declare(&name, t.clone(), c_mem);
                    Stmt::Var(name, t, init)
                }
                3..=5 => {
                    let name = self.fresh_name(env);
                    let e = self.value_expr(program, env);
                    let t = oracle_types(self, &e, env).expect("typed");
                    env.declare(&name, t, matches!(e, Expr::Malloc));
                    Stmt::Short(name, e)
                }
                6 => {
                    let vars = env.visible();
                    let Some(target) = vars.choose(self.rng).cloned() else { continue };
                    let Some(e) = self.expr_of_type(&target.ty, program, env) else { continue };
                    Stmt::Assign(target.name, e)
                }
                7 if depth < 2 => {
                    env.scopes.push(Vec::new());
                    let inner = self.stmts(program, env, depth + 1);
                    env.scopes.pop();
                    Stmt::Block(inner)
                }
                _ => {
                    let n = self.rng.gen_range(1..4);
                    Stmt::Use((0..n).map(|_| self.arg(program, env)).collect())
                }
            };
            out.push(s);
        }
        out
    }
}

/// Deterministic random program for `seed`.
pub fn generate(seed: u64) -> Program {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut g = Gen { rng: &mut rng, types: Vec::new() };
    g.gen_type_decls();
    let mut program = Program { types: g.types.clone(), globals: Vec::new(), funcs: Vec::new(), split: false };
    program.split = g.rng.gen_bool(0.4);

    let mut env = Env::default();
    env.scopes.push(Vec::new());
    for name in GLOBAL_NAMES.iter().take(g.rng.gen_range(0..=GLOBAL_NAMES.len())) {
        let t = g.leaf_type();
        let init = if g.rng.gen_bool(0.3) && matches!(t, GTy::Named(_) | GTy::Str) {
            g.expr_of_type(&t, &program, &env).filter(|e| matches!(e, Expr::Composite(_) | Expr::StrLit))
        } else {
            None
        };
        env.declare(name, t.clone(), false);
        program.globals.push((name.to_string(), t, init));
    }

    for f in 0..g.rng.gen_range(1..4) {
        env.scopes.push(Vec::new());
        let mut params = Vec::new();
        for name in PARAM_NAMES.iter().take(g.rng.gen_range(0..3)) {
            let t = g.leaf_type();
            env.declare(name, t.clone(), false);
            params.push((name.to_string(), t));
        }
        let mut body = g.stmts(&program, &mut env, 0);
        if !body.iter().any(|s| matches!(s, Stmt::Use(_))) {
            let arg = g.arg(&program, &env);
            body.push(Stmt::Use(vec![arg]));
        }
        env.scopes.pop();
        program.funcs.push(Func { name: format!("f{f}"), params, body });
    }
    program
}

// -------------------------------------------------------------- renderer

pub fn render_type(t: &GTy, types: &[(String, GTy)]) -> String {
    match t {
        GTy::Scalar(n) => n.to_string(),
        GTy::CScalar(n) | GTy::CStruct(n) => format!("C.{n}"),
        GTy::Ptr(t) => format!("*{}", render_type(t, types)),
        GTy::Arr(n, t) => format!("[{n}]{}", render_type(t, types)),
        GTy::Slice(t) => format!("[]{}", render_type(t, types)),
        GTy::Str => "string".into(),
        GTy::Map => "map[string]int".into(),
        GTy::Iface => "interface{}".into(),
        GTy::UnsafePtr => "unsafe.Pointer".into(),
        GTy::Struct(fields) => {
            let parts: Vec<String> = fields.iter().map(|(n, t)| format!("{n} {}", render_type(t, types))).collect();
            format!("struct {{ {} }}", parts.join("; "))
        }
        GTy::Named(i) => types[*i].0.clone(),
    }
}

pub fn render_expr(e: &Expr, types: &[(String, GTy)]) -> String {
    let operand = |e: &Expr| match e {
        Expr::Deref(_) | Expr::AddrOf(_) => format!("({})", render_expr(e, types)),
        _ => render_expr(e, types),
    };
    match e {
        Expr::Var(n) => n.clone(),
        Expr::AddrOf(inner) => format!("&{}", operand(inner)),
        Expr::Field(base, f) => format!("{}.{f}", operand(base)),
        Expr::Index(base) => format!("{}[0]", operand(base)),
        Expr::Deref(inner) => format!("*{}", operand(inner)),
        Expr::New(t) => format!("new({})", render_type(t, types)),
        Expr::Composite(i) => format!("{}{{}}", types[*i].0),
        Expr::IntLit => "7".into(),
        Expr::FloatLit => "1.5".into(),
        Expr::StrLit => "\"s\"".into(),
        Expr::BoolLit => "true".into(),
        Expr::CString => "C.CString(\"go\")".into(),
        Expr::Malloc => "C.malloc(16)".into(),
        Expr::UnsafeConv(inner) => format!("unsafe.Pointer({})", render_expr(inner, types)),
        Expr::PtrCast(t, inner) => format!("(*{})({})", render_type(t, types), render_expr(inner, types)),
        Expr::CConv(c, inner) => format!("C.{c}({})", render_expr(inner, types)),
        Expr::MakeSlice(t) => format!("make([]{}, 4)", render_type(t, types)),
    }
}

pub struct Rendered {
    /// (file name, source)
    pub files: Vec<(String, String)>,
    /// Line in `main.go` of each `C.use` call, in source order.
    pub use_lines: Vec<u32>,
}

fn render_stmts(stmts: &[Stmt], types: &[(String, GTy)], indent: usize, lines: &mut Vec<String>, uses: &mut Vec<u32>) {
    let pad = "\t".repeat(indent);
    for s in stmts {
        match s {
            Stmt::Var(n, t, None) => lines.push(format!("{pad}var {n} {}", render_type(t, types))),
            Stmt::Var(n, t, Some(e)) => {
                lines.push(format!("{pad}var {n} {} = {}", render_type(t, types), render_expr(e, types)))
            }
            Stmt::Short(n, e) => lines.push(format!("{pad}{n} := {}", render_expr(e, types))),
            Stmt::Assign(n, e) => lines.push(format!("{pad}{n} = {}", render_expr(e, types))),
            Stmt::Block(inner) => {
                lines.push(format!("{pad}{{"));
                render_stmts(inner, types, indent + 1, lines, uses);
                lines.push(format!("{pad}}}"));
            }
            Stmt::Use(args) => {
                let args: Vec<String> = args.iter().map(|a| render_expr(a, types)).collect();
                lines.push(format!("{pad}C.use({})", args.join(", ")));
                uses.push(lines.len() as u32);
            }
        }
    }
}

pub fn render(p: &Program) -> Rendered {
    let types = &p.types;
    let mut decls = Vec::new();
    for (name, t) in types {
        decls.push(format!("type {name} {}", render_type(t, types)));
        decls.push(String::new());
    }
    for (name, t, init) in &p.globals {
        match init {
            Some(e) => decls.push(format!("var {name} {} = {}", render_type(t, types), render_expr(e, types))),
            None => decls.push(format!("var {name} {}", render_type(t, types))),
        }
    }

    let mut lines: Vec<String> = vec![
        "package gen".into(),
        String::new(),
        "// #include <stdlib.h>".into(),
        "// void use(void *p, ...);".into(),
        "import \"C\"".into(),
        "import \"unsafe\"".into(),
        String::new(),
    ];
    if !p.split {
        lines.append(&mut decls.clone());
        lines.push(String::new());
    }
    let mut uses = Vec::new();
    for f in &p.funcs {
        let params: Vec<String> = f.params.iter().map(|(n, t)| format!("{n} {}", render_type(t, types))).collect();
        lines.push(format!("func {}({}) {{", f.name, params.join(", ")));
        render_stmts(&f.body, types, 1, &mut lines, &mut uses);
        lines.push("}".into());
        lines.push(String::new());
    }
    let mut files = vec![("main.go".to_string(), lines.join("\n"))];
    if p.split {
        let mut other = vec![
            "package gen".to_string(),
            String::new(),
            "import \"C\"".into(),
            "import \"unsafe\"".into(),
            String::new(),
        ];
        other.extend(decls);
        other.push(String::new());
        files.push(("decls.go".to_string(), other.join("\n")));
    }
    Rendered { files, use_lines: uses }
}

pub fn parse_rendered(r: &Rendered) -> Vec<SyntaxFacts> {
    r.files.iter().map(|(name, src)| parse_source(name, src)).collect()
}

// ------------------------------------------------------------ comparison

#[derive(Debug, Default, Clone, Copy)]
pub struct OracleTally {
    pub args: usize,
    pub fully_resolved: usize,
    pub unknown: usize,
}

fn has_unknown(t: &TypeShape) -> bool {
    match t {
        TypeShape::Unknown => true,
        TypeShape::PointerTo(t) | TypeShape::SliceOf(t) | TypeShape::ArrayOf(t, _) => has_unknown(t),
        TypeShape::StructOf(fields) => fields.iter().any(|(_, t)| has_unknown(t)),
        _ => false,
    }
}

/// Compares the analyzer's view of every `C.use` argument against the interpreter.
pub fn compare_with_oracle(p: &Program) -> Result<OracleTally, String> {
    let rendered = render(p);
    let facts = parse_rendered(&rendered);
    if let Some(bad) = facts.iter().find(|f| !f.parse_ok) {
        return Err(format!("parse failure {:?}\n{}", bad.parse_errors, rendered.files[0].1));
    }
    let refs: Vec<&SyntaxFacts> = facts.iter().collect();
    let tables = build_unit_tables(&refs);
    let oracle = Oracle { program: p };
    let truths = oracle.interpret();
    let mut calls: Vec<_> = facts[0].calls.iter().filter(|c| c.callee.to_string() == "C.use").collect();
    calls.sort_by_key(|c| c.location);
    if calls.len() != truths.len() {
        return Err(format!("{} uses parsed, {} interpreted", calls.len(), truths.len()));
    }
    let mut tally = OracleTally::default();
    for ((call, truth), line) in calls.iter().zip(&truths).zip(&rendered.use_lines) {
        if call.location.line != *line || call.args.len() != truth.args.len() {
            return Err(format!("use at line {} does not line up", call.location.line));
        }
        for (arg, t) in call.args.iter().zip(&truth.args) {
            tally.args += 1;
            let resolved = resolve_expr_type(arg, &tables[0], &facts[0]);
            let expected = oracle.expected_shape(&t.ty, 12);
            if resolved.is_unknown() {
                tally.unknown += 1;
            } else if !has_unknown(&resolved) {
                tally.fully_resolved += 1;
            }
            if !compatible(&resolved, &expected) {
                return Err(format!("line {line}: `{}` resolved {resolved}, truth {expected}", arg.text));
            }
            let pf = cgoscope_core::pointer_free(&resolved);
            if pf != PointerFree::Unknown && pf != oracle.pointer_free(&t.ty) {
                return Err(format!(
                    "line {line}: `{}` pointer_free {pf:?}, truth {:?}",
                    arg.text,
                    oracle.pointer_free(&t.ty)
                ));
            }
        }
    }
    Ok(tally)
}
