//! Words over the generators `S_e`, `S_e*` of the Cuntz-Krieger algebra of a
//! graph, their reduction to normal form, and enumeration of Catalan words.
//!
//! A nonzero product of generators always reduces to one of `1` or
//! `S_mu P_v S_nu*` where `mu`, `nu` are paths ending at `v`. Here `S_nu` is
//! `S_{nu_1} ... S_{nu_k}`, so `S_nu* = S_{nu_k}* ... S_{nu_1}*`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};
use crate::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    /// `S_e*`
    Star,
    /// `S_e`
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub edge: EdgeId,
}

impl Symbol {
    pub fn star(edge: EdgeId) -> Self {
        Symbol { kind: SymbolKind::Star, edge }
    }

    pub fn plain(edge: EdgeId) -> Self {
        Symbol { kind: SymbolKind::Plain, edge }
    }

    pub fn is_star(self) -> bool {
        self.kind == SymbolKind::Star
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Space-separated rendering, `S_e*` as `name*`.
    pub fn render(&self, g: &Graph) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| match s.kind {
                SymbolKind::Star => format!("{}*", g.edge_name(s.edge)),
                SymbolKind::Plain => g.edge_name(s.edge),
            })
            .collect();
        parts.join(" ")
    }

    pub fn parse(text: &str, g: &Graph) -> Result<Word> {
        text.split_whitespace()
            .map(|tok| match tok.strip_suffix('*') {
                Some(name) => g.edge_by_name(name).map(Symbol::star),
                None => g.edge_by_name(tok).map(Symbol::plain),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// True iff every prefix has at least as many stars as plains and the
    /// totals agree.
    pub fn has_balanced_shape(&self) -> bool {
        let mut height = 0i64;
        for s in &self.0 {
            height += if s.is_star() { 1 } else { -1 };
            if height < 0 {
                return false;
            }
        }
        height == 0
    }
}

/// Reduced form of a word's product in the algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormalForm {
    Zero,
    Identity,
    /// `S_mu P_v S_nu*`; with both paths empty this is the projection `P_v`.
    Term { mu: Vec<EdgeId>, v: Vertex, nu: Vec<EdgeId> },
}

impl NormalForm {
    pub fn projection(v: Vertex) -> Self {
        NormalForm::Term { mu: Vec::new(), v, nu: Vec::new() }
    }

    /// `Some(v)` when this is exactly `P_v`.
    pub fn as_projection(&self) -> Option<Vertex> {
        match self {
            NormalForm::Term { mu, v, nu } if mu.is_empty() && nu.is_empty() => Some(*v),
            _ => None,
        }
    }

    /// Right multiplication by one generator.
    pub fn mul_symbol(self, s: Symbol, g: &Graph) -> NormalForm {
        let e = s.edge;
        match (self, s.kind) {
            (NormalForm::Zero, _) => NormalForm::Zero,
            (NormalForm::Identity, SymbolKind::Plain) => {
                NormalForm::Term { mu: vec![e], v: g.target(e), nu: Vec::new() }
            }
            (NormalForm::Identity, SymbolKind::Star) => {
                NormalForm::Term { mu: Vec::new(), v: g.target(e), nu: vec![e] }
            }
            (NormalForm::Term { mut mu, v, nu }, SymbolKind::Plain) => {
                if nu.is_empty() {
                    // P_v S_e = S_e iff s(e) = v
                    if g.source(e) != v {
                        return NormalForm::Zero;
                    }
                    mu.push(e);
                    NormalForm::Term { mu, v: g.target(e), nu }
                } else if nu[0] == e {
                    // S_e* S_e = P_{t(e)}, absorbed by the next factor of nu
                    NormalForm::Term { mu, v, nu: nu[1..].to_vec() }
                } else {
                    NormalForm::Zero
                }
            }
            (NormalForm::Term { mu, v, mut nu }, SymbolKind::Star) => {
                let ok = match nu.first() {
                    None => g.target(e) == v,
                    Some(&first) => g.composable(e, first),
                };
                if !ok {
                    return NormalForm::Zero;
                }
                nu.insert(0, e);
                NormalForm::Term { mu, v, nu }
            }
        }
    }

    /// Right multiplication by the projection `P_w`.
    pub fn mul_projection(self, w: Vertex, g: &Graph) -> NormalForm {
        match self {
            NormalForm::Zero => NormalForm::Zero,
            NormalForm::Identity => NormalForm::projection(w),
            NormalForm::Term { mu, v, nu } => {
                let ok = match nu.first() {
                    None => v == w,
                    Some(&first) => g.source(first) == w,
                };
                if ok {
                    NormalForm::Term { mu, v, nu }
                } else {
                    NormalForm::Zero
                }
            }
        }
    }

    /// Product of two normal forms.
    pub fn mul(self, rhs: &NormalForm, g: &Graph) -> NormalForm {
        match rhs {
            NormalForm::Zero => NormalForm::Zero,
            NormalForm::Identity => self,
            NormalForm::Term { mu, v, nu } => {
                let mut acc = if mu.is_empty() { self.mul_projection(*v, g) } else { self };
                for &e in mu {
                    acc = acc.mul_symbol(Symbol::plain(e), g);
                }
                for &e in nu.iter().rev() {
                    acc = acc.mul_symbol(Symbol::star(e), g);
                }
                acc
            }
        }
    }

    pub fn render(&self, g: &Graph) -> String {
        match self {
            NormalForm::Zero => "0".into(),
            NormalForm::Identity => "1".into(),
            NormalForm::Term { mu, v, nu } => {
                let path = |p: &[EdgeId]| p.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join(" ");
                format!("S[{}] P_{} S[{}]*", path(mu), v, path(nu))
            }
        }
    }
}

/// Evaluates the word's product left to right.
pub fn reduce(w: &Word, g: &Graph) -> NormalForm {
    w.0.iter().fold(NormalForm::Identity, |acc, &s| acc.mul_symbol(s, g))
}

/// Returns the root vertex `v(X)` if `w` is a Catalan word of `g`.
///
/// The empty word belongs to no `B_n` with `n >= 1` and yields `None`; the
/// `n = 0` count is handled by convention elsewhere.
pub fn is_catalan_word(w: &Word, g: &Graph) -> Result<Option<Vertex>> {
    if w.len() % 2 == 1 {
        return Err(Error::OddLength(w.len()));
    }
    if w.is_empty() || !w.has_balanced_shape() {
        return Ok(None);
    }
    Ok(reduce(w, g).as_projection())
}

/// Lists `B_n^G` (or `B_n^G(root)`), ordered by root vertex, then first edge,
/// then split index, then the inner and outer sub-words recursively.
///
/// `n = 0` yields one empty word per requested root.
pub fn enumerate_words(g: &Graph, n: usize, root: Option<Vertex>, budget: &Budget) -> Result<Vec<Word>> {
    budget.check_n(n)?;
    // levels[k][u] = B_k(u)
    let nv = g.num_vertices();
    let mut levels: Vec<Vec<Vec<Word>>> = vec![vec![vec![Word::empty()]; nv]];
    for m in 1..=n {
        let mut level = Vec::with_capacity(nv);
        let mut produced = 0usize;
        for u in g.vertices() {
            let mut words = Vec::new();
            for &f in g.in_edges(u) {
                let inner_root = g.source(f);
                for k in 0..m {
                    for y in &levels[k][inner_root.index()] {
                        for z in &levels[m - 1 - k][u.index()] {
                            let mut syms = Vec::with_capacity(2 * m);
                            syms.push(Symbol::star(f));
                            syms.extend_from_slice(&y.0);
                            syms.push(Symbol::plain(f));
                            syms.extend_from_slice(&z.0);
                            words.push(Word(syms));
                            produced += 1;
                            budget.check_objects(produced)?;
                        }
                    }
                }
            }
            level.push(words);
        }
        levels.push(level);
    }
    let top = levels.pop().expect("level n exists");
    Ok(match root {
        Some(u) => top.into_iter().nth(u.index()).unwrap_or_default(),
        None => top.into_iter().flatten().collect(),
    })
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalForm::Zero => write!(f, "0"),
            NormalForm::Identity => write!(f, "1"),
            NormalForm::Term { mu, v, nu } => write!(f, "S{:?} P_{} S{:?}*", mu, v, nu),
        }
    }
}
