//! Simulation of `_cgoCheckPointer` insertion, conservative and improved.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::features::{classify_c_selector_call, detect_cgo_import, CallClass};
use crate::frontend::{
    build_unit_tables, pointer_free, resolve_expr_type, CallSite, ExprKind, ExprRef, PointerFree, ScopeTable,
    SyntaxFacts, TypeShape,
};
use crate::patterns::round2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckReason {
    UnsafeParamConservative,
    TypedPointerPointeeHasPointers,
    SafeCastDirectExpr,
    SafeCastAddressOf,
    Unresolvable,
    NoPointerInvolved,
}

impl CheckReason {
    pub fn is_safe_cast(self) -> bool {
        matches!(self, CheckReason::SafeCastDirectExpr | CheckReason::SafeCastAddressOf)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckContext {
    FreeAfterCString,
    Memcpy,
    GoBytes,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CheckSite {
    pub file: PathBuf,
    pub line: u32,
    pub col: u32,
    /// Callee as written, e.g. `C.free`.
    pub call: String,
    pub arg_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDecision {
    pub site: CheckSite,
    pub arg_text: String,
    pub arg_type: TypeShape,
    pub conservative_insert: bool,
    pub improved_insert: bool,
    pub pointee: TypeShape,
    pub reason: CheckReason,
    pub context: CheckContext,
}

impl CheckDecision {
    pub fn eliminated(&self) -> bool {
        self.conservative_insert && !self.improved_insert
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub module_path: String,
    pub n_o: usize,
    pub n_u: usize,
    /// 100·N_u/N_o to 2 decimals, 0 when N_o is 0.
    pub p_u: f64,
    pub decisions: Vec<CheckDecision>,
}

impl CheckReport {
    pub fn from_decisions(module_path: impl Into<String>, mut decisions: Vec<CheckDecision>) -> Self {
        decisions.sort_by(|a, b| a.site.cmp(&b.site));
        let n_o = decisions.iter().filter(|d| d.conservative_insert).count();
        let n_u = decisions.iter().filter(|d| d.eliminated()).count();
        CheckReport { module_path: module_path.into(), n_o, n_u, p_u: p_u(n_o, n_u), decisions }
    }
}

pub fn p_u(n_o: usize, n_u: usize) -> f64 {
    if n_o == 0 {
        0.0
    } else {
        round2(100.0 * n_u as f64 / n_o as f64)
    }
}

/// The toolchain's fast check: insert for `unsafe.Pointer` and for pointers
/// whose pointee is not provably pointer-free.
pub fn conservative_decision(arg_static_type: &TypeShape) -> bool {
    match arg_static_type {
        TypeShape::UnsafePointer => true,
        TypeShape::PointerTo(t) => pointer_free(t) != PointerFree::Yes,
        _ => false,
    }
}

/// Improved verdict for one argument: (improved_insert, pointee, reason).
pub fn improved_decision(
    arg: &ExprRef,
    scopes: &ScopeTable,
    facts: &SyntaxFacts,
    conservative_insert: bool,
) -> (bool, TypeShape, CheckReason) {
    let arg_type = resolve_expr_type(arg, scopes, facts);
    let declared_pointee = match &arg_type {
        TypeShape::PointerTo(t) => (**t).clone(),
        _ => TypeShape::Unknown,
    };
    if !conservative_insert {
        return (false, declared_pointee, CheckReason::NoPointerInvolved);
    }
    let Some(inner) = arg.unsafe_pointer_operand() else {
        let reason = if arg_type == TypeShape::UnsafePointer {
            CheckReason::UnsafeParamConservative
        } else {
            CheckReason::TypedPointerPointeeHasPointers
        };
        return (true, declared_pointee, reason);
    };
    if let ExprKind::AddressOf(target) = &inner.kind {
        let pointee = resolve_expr_type(target, scopes, facts);
        if pointer_free(&pointee) == PointerFree::Yes {
            return (false, pointee, CheckReason::SafeCastAddressOf);
        }
        return (true, pointee, CheckReason::Unresolvable);
    }
    if is_c_memory(inner, scopes) {
        return (false, TypeShape::c_named("void"), CheckReason::SafeCastDirectExpr);
    }
    match resolve_expr_type(inner, scopes, facts) {
        TypeShape::PointerTo(t) if pointer_free(&t) == PointerFree::Yes => (false, *t, CheckReason::SafeCastDirectExpr),
        TypeShape::PointerTo(t) => (true, *t, CheckReason::Unresolvable),
        _ => (true, TypeShape::Unknown, CheckReason::Unresolvable),
    }
}

fn is_c_allocation(e: &ExprRef) -> bool {
    match &e.kind {
        ExprKind::Call(callee, _) => matches!(callee.c_member(), Some("malloc" | "calloc" | "CBytes")),
        _ => false,
    }
}

/// `e` is a C allocation result, directly or through a never-reassigned variable.
fn is_c_memory(e: &ExprRef, scopes: &ScopeTable) -> bool {
    if is_c_allocation(e) {
        return true;
    }
    let ExprKind::Ident(name) = &e.kind else { return false };
    match scopes.lookup_value(name, e.location) {
        Some(hit) if !hit.reassigned => hit.decl.init.as_ref().is_some_and(is_c_allocation),
        _ => false,
    }
}

/// Context of an inserted check, by callee and argument provenance.
pub fn classify_context(call: &CallSite, arg: &ExprRef, scopes: &ScopeTable) -> CheckContext {
    match call.callee.c_member() {
        Some("free") if traces_to_cstring(arg, scopes, 0) => CheckContext::FreeAfterCString,
        Some("memcpy") => CheckContext::Memcpy,
        Some("GoBytes") => CheckContext::GoBytes,
        _ => CheckContext::Other,
    }
}

fn traces_to_cstring(e: &ExprRef, scopes: &ScopeTable, depth: usize) -> bool {
    if depth > 8 {
        return false;
    }
    match &e.kind {
        ExprKind::Call(callee, _) => callee.c_member() == Some("CString"),
        ExprKind::Conversion(_, inner) => traces_to_cstring(inner, scopes, depth + 1),
        ExprKind::Ident(name) => scopes
            .lookup_value(name, e.location)
            .and_then(|hit| hit.decl.init.as_ref())
            .is_some_and(|init| traces_to_cstring(init, scopes, depth + 1)),
        _ => false,
    }
}

fn decide_call(call: &CallSite, scopes: &ScopeTable, facts: &SyntaxFacts) -> Vec<CheckDecision> {
    call.args
        .iter()
        .enumerate()
        .map(|(i, arg)| {
            let arg_type = resolve_expr_type(arg, scopes, facts);
            let conservative = conservative_decision(&arg_type);
            let (improved, pointee, reason) = improved_decision(arg, scopes, facts, conservative);
            let context = if conservative { classify_context(call, arg, scopes) } else { CheckContext::Other };
            CheckDecision {
                site: CheckSite {
                    file: facts.file_path.clone(),
                    line: call.location.line,
                    col: call.location.col,
                    call: call.callee.to_string(),
                    arg_index: i,
                },
                arg_text: arg.text.clone(),
                arg_type,
                conservative_insert: conservative,
                improved_insert: improved,
                pointee,
                reason,
                context,
            }
        })
        .collect()
}

/// Decisions for every Go-to-C call argument in one package.
pub fn analyze_module(module_path: &str, package_facts: &[SyntaxFacts]) -> CheckReport {
    let files: Vec<&SyntaxFacts> = package_facts.iter().collect();
    let tables = build_unit_tables(&files);
    let mut decisions = Vec::new();
    for (facts, scopes) in files.iter().zip(&tables) {
        if detect_cgo_import(facts).is_none() {
            continue;
        }
        for call in &facts.calls {
            if classify_c_selector_call(call) == CallClass::GoToCCall {
                decisions.extend(decide_call(call, scopes, facts));
            }
        }
    }
    CheckReport::from_decisions(module_path, decisions)
}

/// Annotated excerpts showing where checks would and would not be inserted.
pub fn rewrite_preview(report: &CheckReport, package_facts: &[SyntaxFacts]) -> String {
    let mut out = String::new();
    let _ =
        writeln!(out, "module {}: N_o={} N_u={} P_u={:.2}%", report.module_path, report.n_o, report.n_u, report.p_u);
    let mut last: Option<(&PathBuf, u32, u32)> = None;
    for d in report.decisions.iter().filter(|d| d.conservative_insert) {
        let key = (&d.site.file, d.site.line, d.site.col);
        if last != Some(key) {
            let source = package_facts
                .iter()
                .find(|f| f.file_path == d.site.file)
                .map(|f| f.line_text(d.site.line).trim().to_string())
                .unwrap_or_default();
            let _ = writeln!(out, "\n{}:{}:{}", d.site.file.display(), d.site.line, d.site.col);
            let _ = writeln!(out, "    {source}");
            last = Some(key);
        }
        let verdict = if d.improved_insert { "keep  " } else { "remove" };
        let _ = writeln!(
            out,
            "  {verdict} _cgoCheckPointer({}, nil)  // arg {}, {:?}, pointee {}, {:?}",
            d.arg_text, d.site.arg_index, d.reason, d.pointee, d.context
        );
    }
    out
}
