//! Go source to [`SyntaxFacts`] via the tree-sitter Go grammar.

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;

use tree_sitter::{Node, Parser};

use super::syntax::*;
use crate::cnames;

const MAX_EXPR_DEPTH: usize = 200;

const STATEMENT_KINDS: &[&str] = &[
    "expression_statement",
    "send_statement",
    "inc_statement",
    "dec_statement",
    "assignment_statement",
    "short_var_declaration",
    "var_declaration",
    "const_declaration",
    "type_declaration",
    "go_statement",
    "defer_statement",
    "if_statement",
    "for_statement",
    "expression_switch_statement",
    "type_switch_statement",
    "select_statement",
    "return_statement",
    "break_statement",
    "continue_statement",
    "goto_statement",
    "fallthrough_statement",
];

/// Parses one Go file. Never fails: problems land in `parse_errors` with `parse_ok = false`.
pub fn parse_source(path: impl Into<PathBuf>, text: &str) -> SyntaxFacts {
    let path = path.into();
    let mut facts = SyntaxFacts::empty(path);
    if text.trim().is_empty() {
        facts.parse_errors.push(ParseDiagnostic { line: 1, message: "empty file".into() });
        return facts;
    }

    let mut parser = Parser::new();
    parser.set_language(&tree_sitter_go::LANGUAGE.into()).expect("tree-sitter Go grammar is ABI compatible");
    let Some(tree) = parser.parse(text, None) else {
        facts.parse_errors.push(ParseDiagnostic { line: 1, message: "parser gave up".into() });
        return facts;
    };

    facts.source = text.to_string();
    facts.line_count = text.lines().count() as u32;
    let root = tree.root_node();

    let mut walker = Walker::new(text, facts);
    walker.collect_comments(root);
    walker.facts.scopes.push(Scope {
        id: ScopeId::PACKAGE,
        parent: None,
        kind: ScopeKind::Package,
        span: Span { start: Pos::START, end: Pos::new(u32::MAX, u32::MAX) },
    });
    walker.scope_stack.push(ScopeId::PACKAGE);
    walker.source_file(root);

    let mut facts = walker.facts;
    if root.has_error() {
        collect_syntax_errors(root, text, &mut facts.parse_errors);
        if facts.parse_errors.is_empty() {
            facts.parse_errors.push(ParseDiagnostic { line: 1, message: "syntax error".into() });
        }
    }
    if facts.package_name.is_empty() {
        facts.parse_errors.push(ParseDiagnostic { line: 1, message: "missing package clause".into() });
    }
    facts.parse_ok = facts.parse_errors.is_empty();
    facts
}

/// Lossy-decodes non-UTF-8 input before parsing.
pub fn parse_bytes(path: impl Into<PathBuf>, bytes: &[u8]) -> SyntaxFacts {
    parse_source(path, &String::from_utf8_lossy(bytes))
}

fn collect_syntax_errors(node: Node, src: &str, out: &mut Vec<ParseDiagnostic>) {
    if out.len() >= 20 {
        return;
    }
    if node.is_missing() {
        out.push(ParseDiagnostic {
            line: node.start_position().row as u32 + 1,
            message: format!("missing `{}`", node.kind()),
        });
        return;
    }
    if node.is_error() {
        let snippet: String = node.utf8_text(src.as_bytes()).unwrap_or("").chars().take(40).collect();
        out.push(ParseDiagnostic {
            line: node.start_position().row as u32 + 1,
            message: format!("syntax error near `{}`", snippet.replace('\n', " ")),
        });
        return;
    }
    if !node.has_error() {
        return;
    }
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        collect_syntax_errors(child, src, out);
    }
}

fn pos(n: Node) -> Pos {
    let p = n.start_position();
    Pos::new(p.row as u32 + 1, p.column as u32 + 1)
}

fn end_pos(n: Node) -> Pos {
    let p = n.end_position();
    Pos::new(p.row as u32 + 1, p.column as u32 + 1)
}

fn span(n: Node) -> Span {
    Span { start: pos(n), end: end_pos(n) }
}

fn named_children<'t>(n: Node<'t>) -> Vec<Node<'t>> {
    let mut cursor = n.walk();
    n.named_children(&mut cursor).filter(|c| c.kind() != "comment").collect()
}

fn has_token(n: Node, token: &str) -> bool {
    let mut cursor = n.walk();
    let found = n.children(&mut cursor).any(|c| !c.is_named() && c.kind() == token);
    found
}

struct Walker<'s> {
    src: &'s str,
    facts: SyntaxFacts,
    scope_stack: Vec<ScopeId>,
    declared: HashSet<(ScopeId, String)>,
    current_func: Option<usize>,
    func_params: HashSet<String>,
    literal_depth: usize,
    /// Comment-group index by the line the group ends on.
    doc_by_end_line: HashMap<u32, usize>,
}

impl<'s> Walker<'s> {
    fn new(src: &'s str, facts: SyntaxFacts) -> Self {
        Walker {
            src,
            facts,
            scope_stack: Vec::new(),
            declared: HashSet::new(),
            current_func: None,
            func_params: HashSet::new(),
            literal_depth: 0,
            doc_by_end_line: HashMap::new(),
        }
    }

    fn text(&self, n: Node) -> &'s str {
        &self.src[n.byte_range()]
    }

    fn scope(&self) -> ScopeId {
        *self.scope_stack.last().expect("scope stack is never empty")
    }

    fn push_scope(&mut self, kind: ScopeKind, span: Span) -> ScopeId {
        let id = ScopeId(self.facts.scopes.len() as u32);
        self.facts.scopes.push(Scope { id, parent: Some(self.scope()), kind, span });
        self.scope_stack.push(id);
        id
    }

    fn pop_scope(&mut self) {
        self.scope_stack.pop();
    }

    fn with_scope(&mut self, n: Node, kind: ScopeKind, body: impl FnOnce(&mut Self)) {
        self.push_scope(kind, span(n));
        body(self);
        self.pop_scope();
    }

    // ---- comments -------------------------------------------------------

    fn collect_comments(&mut self, root: Node) {
        let mut nodes = Vec::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if n.kind() == "comment" {
                nodes.push(n);
                continue;
            }
            let mut cursor = n.walk();
            let children: Vec<Node> = n.children(&mut cursor).collect();
            stack.extend(children.into_iter().rev());
        }
        nodes.sort_by_key(|n| n.start_byte());

        let mut groups: Vec<(CommentGroup, bool)> = Vec::new();
        let mut prev_end: Option<usize> = None;
        for n in nodes {
            let comment = Comment { raw: self.text(n).to_string(), start: pos(n), end_line: end_pos(n).line };
            let joins = prev_end.is_some_and(|end| {
                let gap = &self.src[end..n.start_byte()];
                gap.chars().all(char::is_whitespace) && gap.matches('\n').count() <= 1
            });
            prev_end = Some(n.end_byte());
            match groups.last_mut() {
                Some((group, _)) if joins => group.comments.push(comment),
                _ => {
                    let line_start = self.src[..n.start_byte()].rfind('\n').map_or(0, |i| i + 1);
                    let own_line = self.src[line_start..n.start_byte()].trim().is_empty();
                    groups.push((CommentGroup { comments: vec![comment] }, own_line));
                }
            }
        }
        for (i, (group, own_line)) in groups.into_iter().enumerate() {
            if own_line {
                self.doc_by_end_line.insert(group.end_line(), i);
            }
            self.facts.comment_groups.push(group);
        }
    }

    fn doc_for_line(&self, line: u32) -> Option<usize> {
        line.checked_sub(1).and_then(|l| self.doc_by_end_line.get(&l).copied())
    }

    // ---- top level -------------------------------------------------------

    fn source_file(&mut self, root: Node) {
        for child in named_children(root) {
            match child.kind() {
                "package_clause" => {
                    if let Some(id) = named_children(child).into_iter().find(|c| c.kind() == "package_identifier") {
                        self.facts.package_name = self.text(id).to_string();
                    }
                }
                "import_declaration" => self.import_declaration(child),
                _ => self.visit(child),
            }
        }
    }

    fn import_declaration(&mut self, n: Node) {
        let mut specs = Vec::new();
        for c in named_children(n) {
            match c.kind() {
                "import_spec" => specs.push(c),
                "import_spec_list" => specs.extend(named_children(c).into_iter().filter(|s| s.kind() == "import_spec")),
                _ => {}
            }
        }
        let single = specs.len() == 1;
        for spec in specs {
            let Some(path_node) = spec.child_by_field_name("path") else { continue };
            let raw = self.text(path_node);
            let path = raw.trim_matches(|c| c == '"' || c == '`').to_string();
            let alias = spec.child_by_field_name("name").map(|a| self.text(a).to_string());
            let mut comment = self.doc_for_line(pos(spec).line);
            if comment.is_none() && single {
                comment = self.doc_for_line(pos(n).line);
            }
            self.facts.imports.push(Import { path, alias, location: pos(spec), comment });
        }
    }

    // ---- generic traversal ----------------------------------------------

    fn visit_children(&mut self, n: Node) {
        for c in named_children(n) {
            self.visit(c);
        }
    }

    fn visit(&mut self, n: Node) {
        if let Some(idx) = self.current_func.filter(|_| STATEMENT_KINDS.contains(&n.kind())) {
            self.facts.func_decls[idx].statement_count += 1;
        }
        match n.kind() {
            "function_declaration" | "method_declaration" => self.func_decl(n),
            "func_literal" => self.func_literal(n),
            "block" => self.with_scope(n, ScopeKind::Block, |w| w.visit_children(n)),
            "if_statement"
            | "for_statement"
            | "expression_switch_statement"
            | "select_statement"
            | "expression_case"
            | "default_case"
            | "communication_case" => self.with_scope(n, ScopeKind::Block, |w| w.visit_children(n)),
            "type_switch_statement" => self.type_switch(n),
            "var_declaration" => self.value_declaration(n, "var_spec", DeclKind::Var),
            "const_declaration" => self.value_declaration(n, "const_spec", DeclKind::Const),
            "type_declaration" => self.type_declaration(n),
            "short_var_declaration" => self.short_var(n),
            "assignment_statement" => self.assignment(n),
            "range_clause" => self.range_clause(n),
            "receive_statement" => self.receive(n),
            "return_statement" => self.return_statement(n),
            "call_expression" => self.call_expression(n),
            "type_conversion_expression" => {
                let e = self.expr(n, 0);
                self.facts.conversions.push(e);
                self.visit_children(n);
            }
            "selector_expression" => {
                if let Some(op) = n.child_by_field_name("operand") {
                    if op.kind() == "identifier" {
                        self.record_selector(n, SelectorRole::Value);
                    } else {
                        self.visit(op);
                    }
                }
            }
            "qualified_type" => self.record_selector(n, SelectorRole::Type),
            _ => self.visit_children(n),
        }
    }

    fn record_selector(&mut self, n: Node, role: SelectorRole) {
        let (base, member) = match n.kind() {
            "qualified_type" => (n.child_by_field_name("package"), n.child_by_field_name("name")),
            _ => (n.child_by_field_name("operand"), n.child_by_field_name("field")),
        };
        if let (Some(b), Some(m)) = (base, member) {
            let base = self.text(b).to_string();
            let member = self.text(m).to_string();
            if !base.is_empty() && !member.is_empty() {
                self.facts.selectors.push(SelectorRef { base, member, role, location: pos(n) });
            }
        }
    }

    /// Records selectors inside a type written in expression syntax, e.g. `(*C.char)`.
    fn record_type_selectors(&mut self, n: Node) {
        match n.kind() {
            "selector_expression" => {
                if n.child_by_field_name("operand").is_some_and(|o| o.kind() == "identifier") {
                    self.record_selector(n, SelectorRole::Type);
                }
            }
            "qualified_type" => self.record_selector(n, SelectorRole::Type),
            _ => {
                for c in named_children(n) {
                    self.record_type_selectors(c);
                }
            }
        }
    }

    // ---- declarations ----------------------------------------------------

    fn declare(
        &mut self,
        name: Node,
        kind: DeclKind,
        type_expr: Option<TypeExpr>,
        init: Option<ExprRef>,
        visible_from: Pos,
    ) {
        let text = self.text(name);
        if text == "_" || text.is_empty() {
            return;
        }
        let scope = self.scope();
        let visible_from = if scope == ScopeId::PACKAGE { Pos::START } else { visible_from };
        self.declared.insert((scope, text.to_string()));
        self.facts.decls.push(Decl {
            name: text.to_string(),
            kind,
            type_expr,
            init,
            scope,
            location: pos(name),
            visible_from,
        });
    }

    fn value_declaration(&mut self, n: Node, spec_kind: &str, kind: DeclKind) {
        let mut specs = Vec::new();
        for c in named_children(n) {
            if c.kind() == spec_kind {
                specs.push(c);
            } else if c.kind().ends_with("_spec_list") {
                specs.extend(named_children(c).into_iter().filter(|s| s.kind() == spec_kind));
            }
        }
        for spec in specs {
            let mut cursor = spec.walk();
            let names: Vec<Node> = spec.children_by_field_name("name", &mut cursor).collect();
            let type_expr = spec.child_by_field_name("type").map(|t| self.type_of(t));
            let values: Vec<Node> = spec.child_by_field_name("value").map(named_children).unwrap_or_default();
            let visible = end_pos(spec);
            for (i, name) in names.iter().enumerate() {
                let init = (values.len() == names.len()).then(|| self.expr(values[i], 0));
                self.declare(*name, kind, type_expr.clone(), init, visible);
            }
            for c in named_children(spec) {
                if c.kind() != "identifier" {
                    self.visit(c);
                }
            }
        }
    }

    fn type_declaration(&mut self, n: Node) {
        for spec in named_children(n) {
            if !matches!(spec.kind(), "type_spec" | "type_alias") {
                continue;
            }
            let Some(name) = spec.child_by_field_name("name") else { continue };
            let generic = spec.child_by_field_name("type_parameters").is_some();
            let type_expr = spec.child_by_field_name("type").map(|t| {
                if generic {
                    TypeExpr::Other(self.text(t).to_string())
                } else {
                    self.type_of(t)
                }
            });
            self.declare(name, DeclKind::Type, type_expr, None, pos(name));
            if let Some(t) = spec.child_by_field_name("type") {
                self.visit(t);
            }
        }
    }

    fn short_var(&mut self, n: Node) {
        let left: Vec<Node> = n.child_by_field_name("left").map(named_children).unwrap_or_default();
        let right: Vec<Node> = n.child_by_field_name("right").map(named_children).unwrap_or_default();
        let visible = end_pos(n);
        let scope = self.scope();
        let paired = left.len() == right.len();
        for (i, l) in left.iter().enumerate() {
            if l.kind() != "identifier" {
                continue;
            }
            let name = self.text(*l).to_string();
            let value = paired.then(|| self.expr(right[i], 0));
            if self.declared.contains(&(scope, name.clone())) {
                self.facts.assignments.push(Assignment { target: name, value, scope, location: pos(*l) });
            } else {
                self.declare(*l, DeclKind::ShortVar, None, value, visible);
            }
        }
        for r in right {
            self.visit(r);
        }
    }

    fn assignment(&mut self, n: Node) {
        let left: Vec<Node> = n.child_by_field_name("left").map(named_children).unwrap_or_default();
        let right: Vec<Node> = n.child_by_field_name("right").map(named_children).unwrap_or_default();
        let plain = n.child_by_field_name("operator").is_some_and(|o| self.text(o) == "=");
        let paired = plain && left.len() == right.len();
        let scope = self.scope();
        for (i, l) in left.iter().enumerate() {
            match l.kind() {
                "identifier" => {
                    let target = self.text(*l).to_string();
                    if target != "_" {
                        let value = paired.then(|| self.expr(right[i], 0));
                        self.facts.assignments.push(Assignment { target, value, scope, location: pos(*l) });
                    }
                }
                _ => {
                    if let Some(root) = self.lvalue_root(*l) {
                        if self.func_params.contains(root) {
                            if let Some(idx) = self.current_func {
                                self.facts.func_decls[idx].writes_through_param = true;
                            }
                        }
                    }
                    self.visit(*l);
                }
            }
        }
        for r in right {
            self.visit(r);
        }
    }

    /// Root identifier of `*p`, `p.f`, `p[i]`; `None` for a bare identifier.
    fn lvalue_root(&self, n: Node) -> Option<&'s str> {
        let mut cur = n;
        let mut wrapped = false;
        loop {
            match cur.kind() {
                "identifier" => return wrapped.then(|| self.text(cur)),
                "unary_expression" if cur.child_by_field_name("operator").is_some_and(|o| self.text(o) == "*") => {
                    cur = cur.child_by_field_name("operand")?;
                }
                "selector_expression" | "index_expression" => cur = cur.child_by_field_name("operand")?,
                "parenthesized_expression" => cur = *named_children(cur).first()?,
                _ => return None,
            }
            wrapped = true;
        }
    }

    fn range_clause(&mut self, n: Node) {
        let left: Vec<Node> = n.child_by_field_name("left").map(named_children).unwrap_or_default();
        let scope = self.scope();
        if has_token(n, ":=") {
            let visible = end_pos(n);
            for l in &left {
                if l.kind() == "identifier" {
                    self.declare(*l, DeclKind::ShortVar, None, None, visible);
                }
            }
        } else {
            for l in &left {
                if l.kind() == "identifier" && self.text(*l) != "_" {
                    let target = self.text(*l).to_string();
                    self.facts.assignments.push(Assignment { target, value: None, scope, location: pos(*l) });
                }
            }
        }
        if let Some(r) = n.child_by_field_name("right") {
            self.visit(r);
        }
    }

    fn receive(&mut self, n: Node) {
        if has_token(n, ":=") {
            let left: Vec<Node> = n.child_by_field_name("left").map(named_children).unwrap_or_default();
            let visible = end_pos(n);
            for l in left {
                if l.kind() == "identifier" {
                    self.declare(l, DeclKind::ShortVar, None, None, visible);
                }
            }
            if let Some(r) = n.child_by_field_name("right") {
                self.visit(r);
            }
        } else {
            self.visit_children(n);
        }
    }

    fn type_switch(&mut self, n: Node) {
        self.with_scope(n, ScopeKind::Block, |w| {
            let aliases: Vec<Node> = n.child_by_field_name("alias").map(named_children).unwrap_or_default();
            if let Some(init) = n.child_by_field_name("initializer") {
                w.visit(init);
            }
            if let Some(v) = n.child_by_field_name("value") {
                w.visit(v);
            }
            for clause in named_children(n) {
                if !matches!(clause.kind(), "type_case" | "default_case") {
                    continue;
                }
                w.with_scope(clause, ScopeKind::Block, |w| {
                    let mut cursor = clause.walk();
                    let types: Vec<Node> = clause.children_by_field_name("type", &mut cursor).collect();
                    let ty = match types.as_slice() {
                        [single] if w.text(*single) != "nil" => Some(w.type_of(*single)),
                        _ => None,
                    };
                    for a in &aliases {
                        w.declare(*a, DeclKind::ShortVar, ty.clone(), None, pos(clause));
                    }
                    for c in named_children(clause) {
                        w.visit(c);
                    }
                });
            }
        });
    }

    // ---- functions -------------------------------------------------------

    fn params_of<'t>(&self, list: Node<'t>) -> Vec<(Option<Node<'t>>, TypeExpr)> {
        let mut out = Vec::new();
        for p in named_children(list) {
            let variadic = p.kind() == "variadic_parameter_declaration";
            if !matches!(p.kind(), "parameter_declaration" | "variadic_parameter_declaration") {
                continue;
            }
            let Some(t) = p.child_by_field_name("type") else { continue };
            let mut ty = self.type_of(t);
            if variadic {
                ty = TypeExpr::Slice(Box::new(ty));
            }
            let mut cursor = p.walk();
            let names: Vec<Node> = p.children_by_field_name("name", &mut cursor).collect();
            if names.is_empty() {
                out.push((None, ty));
            } else {
                for name in names {
                    out.push((Some(name), ty.clone()));
                }
            }
        }
        out
    }

    fn declare_signature(&mut self, n: Node) -> (Vec<Param>, Vec<TypeExpr>, Option<TypeExpr>) {
        let start = self.facts.scopes[self.scope().index()].span.start;
        if let Some(tp) = n.child_by_field_name("type_parameters") {
            for decl in named_children(tp) {
                let mut cursor = decl.walk();
                let names: Vec<Node> = decl.children_by_field_name("name", &mut cursor).collect();
                for name in names {
                    self.declare(name, DeclKind::TypeParam, None, None, start);
                }
            }
        }
        let mut receiver = None;
        if let Some(r) = n.child_by_field_name("receiver") {
            for (name, ty) in self.params_of(r) {
                receiver = Some(ty.clone());
                if let Some(name) = name {
                    self.declare(name, DeclKind::Param, Some(ty), None, start);
                }
            }
            self.record_type_selectors(r);
        }
        let mut params = Vec::new();
        if let Some(pl) = n.child_by_field_name("parameters") {
            for (name, ty) in self.params_of(pl) {
                if let Some(name) = name {
                    self.declare(name, DeclKind::Param, Some(ty.clone()), None, start);
                }
                params.push(Param { name: name.map(|n| self.text(n).to_string()), type_expr: ty });
            }
            self.record_type_selectors(pl);
        }
        let mut results = Vec::new();
        if let Some(res) = n.child_by_field_name("result") {
            if res.kind() == "parameter_list" {
                for (name, ty) in self.params_of(res) {
                    if let Some(name) = name {
                        self.declare(name, DeclKind::Result, Some(ty.clone()), None, start);
                    }
                    results.push(ty);
                }
            } else {
                results.push(self.type_of(res));
            }
            self.record_type_selectors(res);
        }
        (params, results, receiver)
    }

    fn func_decl(&mut self, n: Node) {
        let name = n.child_by_field_name("name");
        let name_text = name.map(|x| self.text(x).to_string()).unwrap_or_default();
        if n.kind() == "function_declaration" {
            if let Some(name) = name {
                self.declare(name, DeclKind::Func, None, None, Pos::START);
            }
        }
        let idx = self.facts.func_decls.len();
        self.facts.func_decls.push(FuncDecl {
            name: name_text,
            receiver: None,
            location: pos(n),
            end_line: end_pos(n).line,
            doc: self.doc_for_line(pos(n).line),
            params: Vec::new(),
            results: Vec::new(),
            body_scope: None,
            statement_count: 0,
            return_values: Vec::new(),
            writes_through_param: false,
        });

        let saved_func = self.current_func.replace(idx);
        let saved_params = std::mem::take(&mut self.func_params);
        let scope = self.push_scope(ScopeKind::Func, span(n));
        let (params, results, receiver) = self.declare_signature(n);
        self.func_params = params.iter().filter_map(|p| p.name.clone()).collect();
        if let Some(r) = n.child_by_field_name("receiver") {
            for (name, _) in self.params_of(r) {
                if let Some(name) = name {
                    self.func_params.insert(self.text(name).to_string());
                }
            }
        }
        {
            let f = &mut self.facts.func_decls[idx];
            f.params = params;
            f.results = results;
            f.receiver = receiver;
            f.body_scope = n.child_by_field_name("body").map(|_| scope);
        }
        if let Some(body) = n.child_by_field_name("body") {
            self.visit_children(body);
        }
        self.pop_scope();
        self.func_params = saved_params;
        self.current_func = saved_func;
    }

    fn func_literal(&mut self, n: Node) {
        self.literal_depth += 1;
        self.push_scope(ScopeKind::Func, span(n));
        self.declare_signature(n);
        if let Some(body) = n.child_by_field_name("body") {
            self.visit_children(body);
        }
        self.pop_scope();
        self.literal_depth -= 1;
    }

    fn return_statement(&mut self, n: Node) {
        if self.literal_depth == 0 {
            if let Some(idx) = self.current_func {
                let values: Vec<ExprRef> = named_children(n)
                    .into_iter()
                    .flat_map(|c| if c.kind() == "expression_list" { named_children(c) } else { vec![c] })
                    .map(|e| self.expr(e, 0))
                    .collect();
                self.facts.func_decls[idx].return_values.extend(values);
            }
        }
        self.visit_children(n);
    }

    // ---- calls and expressions ------------------------------------------

    fn call_expression(&mut self, n: Node) {
        let Some(function) = n.child_by_field_name("function") else {
            self.visit_children(n);
            return;
        };
        let args = n.child_by_field_name("arguments").map(named_children).unwrap_or_default();
        let conversion = self.conversion_target(function);
        let typed_conversion = conversion.is_some() && !matches!(function.kind(), "selector_expression" | "identifier");

        if conversion.is_some() && args.len() == 1 {
            let e = self.expr(n, 0);
            self.facts.conversions.push(e);
        }
        if !typed_conversion {
            let arg_exprs = args.iter().map(|a| self.expr(*a, 0)).collect();
            let deferred = n.parent().is_some_and(|p| p.kind() == "defer_statement");
            self.facts.calls.push(CallSite {
                location: pos(n),
                callee: self.callee(function),
                args: arg_exprs,
                deferred,
                scope: self.scope(),
                func: self.current_func,
                text: self.text(n).to_string(),
            });
        }

        match function.kind() {
            "selector_expression"
                if function.child_by_field_name("operand").is_some_and(|o| o.kind() == "identifier") =>
            {
                let role = if conversion.is_some() { SelectorRole::Type } else { SelectorRole::Callee };
                self.record_selector(function, role);
            }
            _ if typed_conversion => self.record_type_selectors(function),
            _ => self.visit(function),
        }
        for a in args {
            self.visit(a);
        }
    }

    fn callee(&self, f: Node) -> Callee {
        match f.kind() {
            "identifier" => Callee::Ident(self.text(f).to_string()),
            "selector_expression" => match (f.child_by_field_name("operand"), f.child_by_field_name("field")) {
                (Some(op), Some(field)) if op.kind() == "identifier" => {
                    Callee::Selector { base: self.text(op).to_string(), member: self.text(field).to_string() }
                }
                _ => Callee::Other,
            },
            "parenthesized_expression" => named_children(f).first().map_or(Callee::Other, |inner| self.callee(*inner)),
            _ => Callee::Other,
        }
    }

    /// Target type when calling `function` is a conversion rather than a call.
    fn conversion_target(&self, f: Node) -> Option<TypeExpr> {
        match f.kind() {
            "selector_expression" => {
                let op = f.child_by_field_name("operand")?;
                let field = f.child_by_field_name("field")?;
                if op.kind() != "identifier" {
                    return None;
                }
                let (base, member) = (self.text(op), self.text(field));
                let is_type =
                    (base == "unsafe" && member == "Pointer") || (base == "C" && cnames::is_c_type_name(member));
                is_type.then(|| TypeExpr::qualified(base, member))
            }
            "identifier" => {
                let name = self.text(f);
                cnames::is_go_builtin_type(name).then(|| TypeExpr::Named(name.to_string()))
            }
            "parenthesized_expression" => {
                let inner = *named_children(f).first()?;
                match inner.kind() {
                    "unary_expression" => self.type_from_expr(inner),
                    "parenthesized_expression" => self.conversion_target(inner),
                    k if is_type_node(k) => Some(self.type_of(inner)),
                    _ => None,
                }
            }
            k if is_type_node(k) => Some(self.type_of(f)),
            _ => None,
        }
    }

    /// Reads a type written in expression syntax (`*C.char`, `pkg.T`).
    fn type_from_expr(&self, n: Node) -> Option<TypeExpr> {
        match n.kind() {
            "unary_expression" => {
                let op = n.child_by_field_name("operator")?;
                if self.text(op) != "*" {
                    return None;
                }
                let operand = n.child_by_field_name("operand")?;
                Some(TypeExpr::Pointer(Box::new(self.type_from_expr(operand)?)))
            }
            "identifier" => Some(TypeExpr::Named(self.text(n).to_string())),
            "selector_expression" => {
                let op = n.child_by_field_name("operand")?;
                let field = n.child_by_field_name("field")?;
                (op.kind() == "identifier").then(|| TypeExpr::qualified(self.text(op), self.text(field)))
            }
            "parenthesized_expression" => self.type_from_expr(*named_children(n).first()?),
            k if is_type_node(k) => Some(self.type_of(n)),
            _ => None,
        }
    }

    fn type_of(&self, n: Node) -> TypeExpr {
        match n.kind() {
            "type_identifier" | "identifier" => TypeExpr::Named(self.text(n).to_string()),
            "qualified_type" => match (n.child_by_field_name("package"), n.child_by_field_name("name")) {
                (Some(p), Some(name)) => TypeExpr::qualified(self.text(p), self.text(name)),
                _ => TypeExpr::Other(self.text(n).to_string()),
            },
            "pointer_type" => match named_children(n).first() {
                Some(inner) => TypeExpr::Pointer(Box::new(self.type_of(*inner))),
                None => TypeExpr::Other(self.text(n).to_string()),
            },
            "array_type" | "implicit_length_array_type" => {
                let len = n
                    .child_by_field_name("length")
                    .filter(|l| l.kind() == "int_literal")
                    .and_then(|l| parse_int_literal(self.text(l)));
                match n.child_by_field_name("element") {
                    Some(e) => TypeExpr::Array { len, elem: Box::new(self.type_of(e)) },
                    None => TypeExpr::Other(self.text(n).to_string()),
                }
            }
            "slice_type" => match n.child_by_field_name("element") {
                Some(e) => TypeExpr::Slice(Box::new(self.type_of(e))),
                None => TypeExpr::Other(self.text(n).to_string()),
            },
            "map_type" => TypeExpr::Map,
            "channel_type" => TypeExpr::Chan,
            "function_type" => TypeExpr::Func,
            "interface_type" => TypeExpr::Interface,
            "struct_type" => {
                let mut fields = Vec::new();
                for list in named_children(n) {
                    for fd in named_children(list) {
                        if fd.kind() != "field_declaration" {
                            continue;
                        }
                        let Some(t) = fd.child_by_field_name("type") else { continue };
                        let ty = self.type_of(t);
                        let mut cursor = fd.walk();
                        let names: Vec<Node> = fd.children_by_field_name("name", &mut cursor).collect();
                        if names.is_empty() {
                            let embedded = self.text(t).trim_start_matches('*');
                            let name = embedded.rsplit('.').next().unwrap_or(embedded).to_string();
                            fields.push((name, ty));
                        } else {
                            for name in names {
                                fields.push((self.text(name).to_string(), ty.clone()));
                            }
                        }
                    }
                }
                TypeExpr::Struct(fields)
            }
            "parenthesized_type" => match named_children(n).first() {
                Some(inner) => self.type_of(*inner),
                None => TypeExpr::Other(self.text(n).to_string()),
            },
            _ => TypeExpr::Other(self.text(n).to_string()),
        }
    }

    fn expr(&self, n: Node, depth: usize) -> ExprRef {
        let location = pos(n);
        let text = self.text(n).to_string();
        if depth > MAX_EXPR_DEPTH {
            return ExprRef { kind: ExprKind::Other, text, location };
        }
        let sub = |field: &str| n.child_by_field_name(field).map(|c| Box::new(self.expr(c, depth + 1)));
        let kind = match n.kind() {
            "identifier" => ExprKind::Ident(text.clone()),
            "parenthesized_expression" => match named_children(n).first() {
                Some(inner) => return self.expr(*inner, depth + 1),
                None => ExprKind::Other,
            },
            "unary_expression" => {
                let op = n.child_by_field_name("operator").map(|o| self.text(o)).unwrap_or("");
                match (op, sub("operand")) {
                    ("&", Some(e)) => ExprKind::AddressOf(e),
                    ("*", Some(e)) => ExprKind::Deref(e),
                    _ => ExprKind::Other,
                }
            }
            "index_expression" => sub("operand").map_or(ExprKind::Other, ExprKind::IndexOf),
            "slice_expression" => sub("operand").map_or(ExprKind::Other, ExprKind::SliceOf),
            "selector_expression" => match (sub("operand"), n.child_by_field_name("field")) {
                (Some(e), Some(f)) => ExprKind::FieldOf(e, self.text(f).to_string()),
                _ => ExprKind::Other,
            },
            "call_expression" => self.call_kind(n, depth),
            "type_conversion_expression" => match (n.child_by_field_name("type"), sub("operand")) {
                (Some(t), Some(e)) => ExprKind::Conversion(self.type_of(t), e),
                _ => ExprKind::Other,
            },
            "type_assertion_expression" => match (n.child_by_field_name("type"), sub("operand")) {
                (Some(t), Some(e)) => ExprKind::TypeAssert(self.type_of(t), e),
                _ => ExprKind::Other,
            },
            "composite_literal" => match n.child_by_field_name("type") {
                Some(t) => ExprKind::Composite(self.type_of(t)),
                None => ExprKind::Other,
            },
            "int_literal" => ExprKind::Literal(LitKind::Int),
            "float_literal" => ExprKind::Literal(LitKind::Float),
            "imaginary_literal" => ExprKind::Literal(LitKind::Imaginary),
            "rune_literal" => ExprKind::Literal(LitKind::Rune),
            "interpreted_string_literal" | "raw_string_literal" => ExprKind::Literal(LitKind::String),
            "true" | "false" => ExprKind::Literal(LitKind::Bool),
            "nil" => ExprKind::Literal(LitKind::Nil),
            _ => ExprKind::Other,
        };
        ExprRef { kind, text, location }
    }

    fn call_kind(&self, n: Node, depth: usize) -> ExprKind {
        let Some(function) = n.child_by_field_name("function") else { return ExprKind::Other };
        let args: Vec<ExprRef> = n
            .child_by_field_name("arguments")
            .map(named_children)
            .unwrap_or_default()
            .into_iter()
            .map(|a| {
                let a =
                    if a.kind() == "variadic_argument" { named_children(a).first().copied().unwrap_or(a) } else { a };
                self.expr(a, depth + 1)
            })
            .collect();
        match self.conversion_target(function) {
            Some(target) if args.len() == 1 => {
                ExprKind::Conversion(target, Box::new(args.into_iter().next().expect("one argument")))
            }
            _ => ExprKind::Call(self.callee(function), args),
        }
    }
}

fn is_type_node(kind: &str) -> bool {
    matches!(
        kind,
        "pointer_type"
            | "array_type"
            | "implicit_length_array_type"
            | "slice_type"
            | "map_type"
            | "channel_type"
            | "function_type"
            | "interface_type"
            | "struct_type"
            | "parenthesized_type"
            | "qualified_type"
            | "type_identifier"
            | "generic_type"
    )
}

fn parse_int_literal(s: &str) -> Option<u64> {
    let s = s.replace('_', "");
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).ok()
    } else {
        s.parse().ok()
    }
}
