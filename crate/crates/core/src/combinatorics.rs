//! Edge-labeled Dyck paths and rooted plane trees, with their bijections to
//! Catalan words.
//!
//! An up-step labeled `e` plays the role of `S_e*` and a down-step labeled
//! `e` that of `S_e`. Adjacency rules for a labeled path:
//!
//! * `Up(e)` directly after `Up(f)` needs `t(e) = s(f)`;
//! * `Up(e)` directly after `Down(f)` needs `t(e) = t(f)`;
//! * `Down(e)` directly after `Up(f)` needs `e = f`;
//! * the partner of `Up(e)` is `Down(e)`.
//!
//! The root of a path is `t(r)` where `r` labels its last step. In a tree,
//! a node at vertex `w` has children reached through edges `g` with
//! `t(g) = w`, and the child sits at `s(g)`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};
use crate::word::{is_catalan_word, Symbol, SymbolKind, Word};
use crate::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub dir: Direction,
    pub edge: EdgeId,
}

impl Step {
    pub fn up(edge: EdgeId) -> Self {
        Step { dir: Direction::Up, edge }
    }

    pub fn down(edge: EdgeId) -> Self {
        Step { dir: Direction::Down, edge }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyckPath {
    pub steps: Vec<Step>,
}

impl DyckPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Heights after each step.
    pub fn heights(&self) -> Vec<i64> {
        let mut h = 0;
        self.steps
            .iter()
            .map(|s| {
                h += if s.dir == Direction::Up { 1 } else { -1 };
                h
            })
            .collect()
    }

    /// Checks the path against every labeling rule and returns its root.
    pub fn validate(&self, g: &Graph) -> Result<Vertex> {
        let fail = |msg: String| Err(Error::NotMember(format!("Dyck path: {msg}")));
        if self.steps.is_empty() {
            return fail("empty path has no root".into());
        }
        let mut open: Vec<EdgeId> = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            if !g.contains_edge(s.edge) {
                return fail(format!("step {i} uses unknown edge {}", s.edge.0));
            }
            if i > 0 {
                let prev = self.steps[i - 1];
                let ok = match (prev.dir, s.dir) {
                    (Direction::Up, Direction::Up) => g.target(s.edge) == g.source(prev.edge),
                    (Direction::Down, Direction::Up) => g.target(s.edge) == g.target(prev.edge),
                    (Direction::Up, Direction::Down) => s.edge == prev.edge,
                    (Direction::Down, Direction::Down) => true,
                };
                if !ok {
                    return fail(format!("step {i} violates adjacency with step {}", i - 1));
                }
            }
            match s.dir {
                Direction::Up => open.push(s.edge),
                Direction::Down => match open.pop() {
                    Some(e) if e == s.edge => {}
                    Some(_) => return fail(format!("step {i} does not match its partner label")),
                    None => return fail(format!("step {i} goes below the axis")),
                },
            }
        }
        if !open.is_empty() {
            return fail("path does not return to the axis".into());
        }
        Ok(g.target(self.steps.last().expect("nonempty").edge))
    }

    /// Every `Down(e)` directly after `Down(f)` has `t(f) = s(e)`.
    pub fn down_steps_compose(&self, g: &Graph) -> bool {
        self.steps.windows(2).all(|w| match (w[0].dir, w[1].dir) {
            (Direction::Down, Direction::Down) => g.composable(w[0].edge, w[1].edge),
            _ => true,
        })
    }

    /// `U:e1 D:e1 ...`
    pub fn render(&self, g: &Graph) -> String {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| {
                let d = if s.dir == Direction::Up { 'U' } else { 'D' };
                format!("{d}:{}", g.edge_name(s.edge))
            })
            .collect();
        parts.join(" ")
    }

    pub fn parse(text: &str, g: &Graph) -> Result<DyckPath> {
        let steps = text
            .split_whitespace()
            .map(|tok| {
                let (d, name) =
                    tok.split_once(':').ok_or_else(|| Error::Parse(format!("bad Dyck step {tok:?}")))?;
                let edge = g.edge_by_name(name)?;
                match d {
                    "U" => Ok(Step::up(edge)),
                    "D" => Ok(Step::down(edge)),
                    _ => Err(Error::Parse(format!("bad Dyck step {tok:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DyckPath { steps })
    }
}

pub fn word_to_dyck(w: &Word, g: &Graph) -> Result<DyckPath> {
    if is_catalan_word(w, g)?.is_none() {
        return Err(Error::NotMember(format!("{:?} is not a Catalan word", w.render(g))));
    }
    let steps = w
        .symbols()
        .iter()
        .map(|s| match s.kind {
            SymbolKind::Star => Step::up(s.edge),
            SymbolKind::Plain => Step::down(s.edge),
        })
        .collect();
    Ok(DyckPath { steps })
}

pub fn dyck_to_word(p: &DyckPath, g: &Graph) -> Result<Word> {
    p.validate(g)?;
    Ok(Word(
        p.steps
            .iter()
            .map(|s| match s.dir {
                Direction::Up => Symbol::star(s.edge),
                Direction::Down => Symbol::plain(s.edge),
            })
            .collect(),
    ))
}

/// Lists labeled Dyck paths of half-length `n` (optionally with a given
/// root) using the first-return decomposition `Up(f) . inner . Down(f) . rest`
/// with `inner` rooted at `s(f)`, `rest` rooted at `t(f)`.
pub fn enumerate_dyck(g: &Graph, n: usize, root: Option<Vertex>, budget: &Budget) -> Result<Vec<DyckPath>> {
    budget.check_n(n)?;
    let nv = g.num_vertices();
    let mut levels: Vec<Vec<Vec<DyckPath>>> = vec![vec![vec![DyckPath::default()]; nv]];
    let mut produced = 0usize;
    for m in 1..=n {
        let mut level = Vec::with_capacity(nv);
        for u in g.vertices() {
            let mut paths = Vec::new();
            for &f in g.in_edges(u) {
                for k in 0..m {
                    for inner in &levels[k][g.source(f).index()] {
                        for rest in &levels[m - 1 - k][u.index()] {
                            let mut steps = Vec::with_capacity(2 * m);
                            steps.push(Step::up(f));
                            steps.extend_from_slice(&inner.steps);
                            steps.push(Step::down(f));
                            steps.extend_from_slice(&rest.steps);
                            paths.push(DyckPath { steps });
                            produced += 1;
                            budget.check_objects(produced)?;
                        }
                    }
                }
            }
            level.push(paths);
        }
        levels.push(level);
    }
    let top = levels.pop().expect("level n exists");
    Ok(match root {
        Some(u) => top.into_iter().nth(u.index()).unwrap_or_default(),
        None => top.into_iter().flatten().collect(),
    })
}

/// A rooted plane tree whose edges carry graph edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedTree {
    pub vertex: Vertex,
    pub children: Vec<(EdgeId, RootedTree)>,
}

impl RootedTree {
    pub fn leaf(vertex: Vertex) -> Self {
        RootedTree { vertex, children: Vec::new() }
    }

    pub fn num_edges(&self) -> usize {
        self.children.iter().map(|(_, c)| 1 + c.num_edges()).sum()
    }

    /// Checks the child rule at every node.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for (e, child) in &self.children {
            if !g.contains_edge(*e) || g.target(*e) != self.vertex || g.source(*e) != child.vertex {
                return Err(Error::NotMember(format!(
                    "tree edge {} does not connect {} to {}",
                    e.0, child.vertex, self.vertex
                )));
            }
            child.validate(g)?;
        }
        Ok(())
    }

    /// `v1(e1(v1), e3(v2(e2(v1))))`
    pub fn render(&self, g: &Graph) -> String {
        let mut s = String::new();
        self.render_into(g, &mut s);
        s
    }

    fn render_into(&self, g: &Graph, out: &mut String) {
        write!(out, "{}", self.vertex).unwrap();
        if self.children.is_empty() {
            return;
        }
        out.push('(');
        for (k, (e, child)) in self.children.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            out.push_str(&g.edge_name(*e));
            out.push('(');
            child.render_into(g, out);
            out.push(')');
        }
        out.push(')');
    }

    pub fn parse(text: &str, g: &Graph) -> Result<RootedTree> {
        let toks = tokenize_tree(text)?;
        let mut pos = 0;
        let t = parse_node(&toks, &mut pos, g)?;
        if pos != toks.len() {
            return Err(Error::Parse("trailing input after tree".into()));
        }
        Ok(t)
    }
}

fn tokenize_tree(text: &str) -> Result<Vec<String>> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if matches!(c, '(' | ')' | ',') || c.is_whitespace() {
            if !cur.is_empty() {
                toks.push(std::mem::take(&mut cur));
            }
            if !c.is_whitespace() {
                toks.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    Ok(toks)
}

fn parse_node(toks: &[String], pos: &mut usize, g: &Graph) -> Result<RootedTree> {
    let bad = |what: &str| Error::Parse(format!("tree: expected {what}"));
    let name = toks.get(*pos).ok_or_else(|| bad("vertex"))?;
    let vertex = name
        .strip_prefix('v')
        .and_then(|k| k.parse::<usize>().ok())
        .filter(|&k| k >= 1 && k <= g.num_vertices())
        .map(Vertex)
        .ok_or_else(|| bad("vertex name v<k>"))?;
    *pos += 1;
    let mut children = Vec::new();
    if toks.get(*pos).map(String::as_str) == Some("(") {
        *pos += 1;
        loop {
            let e = g.edge_by_name(toks.get(*pos).ok_or_else(|| bad("edge"))?)?;
            *pos += 1;
            if toks.get(*pos).map(String::as_str) != Some("(") {
                return Err(bad("'('"));
            }
            *pos += 1;
            let child = parse_node(toks, pos, g)?;
            if toks.get(*pos).map(String::as_str) != Some(")") {
                return Err(bad("')'"));
            }
            *pos += 1;
            children.push((e, child));
            match toks.get(*pos).map(String::as_str) {
                Some(",") => *pos += 1,
                Some(")") => {
                    *pos += 1;
                    break;
                }
                _ => return Err(bad("',' or ')'")),
            }
        }
    }
    Ok(RootedTree { vertex, children })
}

/// Depth-first bijection: each `Up(e)` opens a child through `e`, its
/// partner closes it.
pub fn dyck_to_tree(p: &DyckPath, g: &Graph) -> Result<RootedTree> {
    let root = p.validate(g)?;
    // Stack of (edge into parent, node under construction).
    let mut stack: Vec<(Option<EdgeId>, RootedTree)> = vec![(None, RootedTree::leaf(root))];
    for s in &p.steps {
        match s.dir {
            Direction::Up => stack.push((Some(s.edge), RootedTree::leaf(g.source(s.edge)))),
            Direction::Down => {
                let (e, node) = stack.pop().expect("validated path is balanced");
                let parent = &mut stack.last_mut().expect("root stays on the stack").1;
                parent.children.push((e.expect("non-root node has an edge"), node));
            }
        }
    }
    let (_, tree) = stack.pop().expect("root");
    Ok(tree)
}

pub fn tree_to_dyck(t: &RootedTree, g: &Graph) -> Result<DyckPath> {
    t.validate(g)?;
    if t.children.is_empty() {
        return Err(Error::NotMember("a tree without edges has no Dyck path".into()));
    }
    fn walk(t: &RootedTree, steps: &mut Vec<Step>) {
        for (e, child) in &t.children {
            steps.push(Step::up(*e));
            walk(child, steps);
            steps.push(Step::down(*e));
        }
    }
    let mut steps = Vec::with_capacity(2 * t.num_edges());
    walk(t, &mut steps);
    Ok(DyckPath { steps })
}

/// Trees with `n` edges, listed through the path bijection (`n = 0` gives one
/// single-node tree per root).
pub fn enumerate_trees(g: &Graph, n: usize, root: Option<Vertex>, budget: &Budget) -> Result<Vec<RootedTree>> {
    if n == 0 {
        return Ok(match root {
            Some(u) => vec![RootedTree::leaf(u)],
            None => g.vertices().map(RootedTree::leaf).collect(),
        });
    }
    enumerate_dyck(g, n, root, budget)?.iter().map(|p| dyck_to_tree(p, g)).collect()
}

/// Counts trees with `n` edges directly: a tree at `w` is a sequence of
/// branches, each an incoming edge `h` of `w` followed by a tree at `s(h)`.
pub fn count_trees(g: &Graph, n: usize, root: Option<Vertex>) -> BigUint {
    let nv = g.num_vertices();
    // trees[w][m], branches[w][m] with m edges
    let mut trees = vec![vec![BigUint::one()]; nv];
    let mut branches = vec![vec![BigUint::zero()]; nv];
    for m in 1..=n {
        for w in g.vertices() {
            let b: BigUint = g.in_edges(w).iter().map(|&h| &trees[g.source(h).index()][m - 1]).sum();
            branches[w.index()].push(b);
        }
        for w in 0..nv {
            let t: BigUint = (1..=m).map(|first| &branches[w][first] * &trees[w][m - first]).sum();
            trees[w].push(t);
        }
    }
    match root {
        Some(u) => trees[u.index()][n].clone(),
        None => trees.iter().map(|row| &row[n]).sum(),
    }
}
