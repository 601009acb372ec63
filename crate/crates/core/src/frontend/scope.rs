//! Name resolution over the scope tree of one file, optionally widened to its package.

use std::collections::{HashMap, HashSet};

use super::syntax::{Decl, DeclKind, Pos, ScopeId, SyntaxFacts};

/// Where a declaration came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeclOrigin {
    /// Index into this file's `SyntaxFacts::decls`.
    Local(usize),
    /// Package-level declaration of another file in the same package: (file, decl).
    Peer(usize, usize),
}

#[derive(Debug, Clone)]
struct Entry {
    decl: Decl,
    origin: DeclOrigin,
}

/// Maps `(identifier, use location)` to the nearest enclosing declaration.
#[derive(Debug, Clone)]
pub struct ScopeTable {
    parents: Vec<Option<ScopeId>>,
    children: Vec<Vec<ScopeId>>,
    spans: Vec<super::syntax::Span>,
    entries: Vec<Entry>,
    by_name: HashMap<(ScopeId, String), Vec<usize>>,
    reassigned: HashSet<usize>,
}

/// Builds the table for a single file.
pub fn build_scope_table(facts: &SyntaxFacts) -> ScopeTable {
    let mut table = ScopeTable::skeleton(facts);
    for (i, d) in facts.decls.iter().enumerate() {
        table.insert(d.clone(), DeclOrigin::Local(i));
    }
    table.finish();
    let targets: Vec<usize> =
        facts.assignments.iter().filter_map(|a| table.lookup_entry(&a.target, a.location)).collect();
    table.reassigned.extend(targets);
    table
}

/// Builds one table per file where every file also sees the package-level
/// declarations of the others. All files must belong to the same package.
pub fn build_unit_tables(files: &[&SyntaxFacts]) -> Vec<ScopeTable> {
    let mut tables: Vec<ScopeTable> = files
        .iter()
        .enumerate()
        .map(|(fi, facts)| {
            let mut table = ScopeTable::skeleton(facts);
            for (i, d) in facts.decls.iter().enumerate() {
                table.insert(d.clone(), DeclOrigin::Local(i));
            }
            for (pj, peer) in files.iter().enumerate() {
                if pj == fi {
                    continue;
                }
                for (i, d) in peer.decls.iter().enumerate() {
                    if d.scope == ScopeId::PACKAGE {
                        table.insert(d.clone(), DeclOrigin::Peer(pj, i));
                    }
                }
            }
            table.finish();
            table
        })
        .collect();

    // Reassignment is a property of the declaration, wherever the assignment lives.
    let mut assigned: HashSet<(usize, usize)> = HashSet::new();
    for (fi, facts) in files.iter().enumerate() {
        for a in &facts.assignments {
            if let Some(e) = tables[fi].lookup_entry(&a.target, a.location) {
                assigned.insert(match tables[fi].entries[e].origin {
                    DeclOrigin::Local(d) => (fi, d),
                    DeclOrigin::Peer(f, d) => (f, d),
                });
            }
        }
    }
    for (fi, table) in tables.iter_mut().enumerate() {
        let hits: Vec<usize> = table
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                let key = match e.origin {
                    DeclOrigin::Local(d) => (fi, d),
                    DeclOrigin::Peer(f, d) => (f, d),
                };
                assigned.contains(&key)
            })
            .map(|(i, _)| i)
            .collect();
        table.reassigned.extend(hits);
    }
    tables
}

/// A resolved declaration.
#[derive(Debug, Clone, Copy)]
pub struct Resolved<'a> {
    pub decl: &'a Decl,
    pub origin: DeclOrigin,
    /// Assigned somewhere after its declaration.
    pub reassigned: bool,
}

impl ScopeTable {
    fn skeleton(facts: &SyntaxFacts) -> Self {
        let n = facts.scopes.len().max(1);
        let mut parents = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut spans = vec![super::syntax::Span { start: Pos::START, end: Pos::new(u32::MAX, u32::MAX) }; n];
        for s in &facts.scopes {
            parents[s.id.index()] = s.parent;
            spans[s.id.index()] = s.span;
            if let Some(p) = s.parent {
                children[p.index()].push(s.id);
            }
        }
        for c in &mut children {
            c.sort_by_key(|id| spans[id.index()].start);
        }
        ScopeTable {
            parents,
            children,
            spans,
            entries: Vec::new(),
            by_name: HashMap::new(),
            reassigned: HashSet::new(),
        }
    }

    fn insert(&mut self, decl: Decl, origin: DeclOrigin) {
        let idx = self.entries.len();
        self.by_name.entry((decl.scope, decl.name.clone())).or_default().push(idx);
        self.entries.push(Entry { decl, origin });
    }

    fn finish(&mut self) {
        let entries = &self.entries;
        for list in self.by_name.values_mut() {
            list.sort_by_key(|&i| (entries[i].decl.visible_from, i));
        }
    }

    /// Deepest scope whose span contains `pos`.
    pub fn innermost_scope(&self, pos: Pos) -> ScopeId {
        let mut cur = ScopeId::PACKAGE;
        'descend: loop {
            for &child in &self.children[cur.index()] {
                let span = self.spans[child.index()];
                if span.start > pos {
                    break;
                }
                if span.contains(pos) {
                    cur = child;
                    continue 'descend;
                }
            }
            return cur;
        }
    }

    pub fn parent(&self, scope: ScopeId) -> Option<ScopeId> {
        self.parents.get(scope.index()).copied().flatten()
    }

    fn lookup_entry(&self, name: &str, pos: Pos) -> Option<usize> {
        let mut scope = Some(self.innermost_scope(pos));
        while let Some(s) = scope {
            if let Some(list) = self.by_name.get(&(s, name.to_string())) {
                let hit = if s == ScopeId::PACKAGE {
                    list.last().copied()
                } else {
                    list.iter().rev().find(|&&i| self.entries[i].decl.visible_from <= pos).copied()
                };
                if hit.is_some() {
                    return hit;
                }
            }
            scope = self.parent(s);
        }
        None
    }

    /// Nearest enclosing declaration of `name` visible at `pos`.
    pub fn lookup(&self, name: &str, pos: Pos) -> Option<Resolved<'_>> {
        self.lookup_entry(name, pos).map(|i| Resolved {
            decl: &self.entries[i].decl,
            origin: self.entries[i].origin,
            reassigned: self.reassigned.contains(&i),
        })
    }

    /// Like [`lookup`](Self::lookup) but only value declarations (not types).
    pub fn lookup_value(&self, name: &str, pos: Pos) -> Option<Resolved<'_>> {
        self.lookup(name, pos).filter(|r| r.decl.is_value())
    }

    /// `true` when `name` at `pos` denotes a declared type or type parameter.
    pub fn is_type_name(&self, name: &str, pos: Pos) -> bool {
        self.lookup(name, pos).is_some_and(|r| matches!(r.decl.kind, DeclKind::Type | DeclKind::TypeParam))
    }
}
