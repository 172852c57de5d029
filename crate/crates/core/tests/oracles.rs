//! Cross-checks of the exact counts against brute force and against each other.

use gcatalan_core::combinatorics::{count_trees, enumerate_dyck, enumerate_trees, DyckPath, Step};
use gcatalan_core::dp::catalan_table;
use gcatalan_core::fixtures;
use gcatalan_core::fock::fock_moment;
use gcatalan_core::word::{enumerate_words, is_catalan_word, reduce, NormalForm, Symbol, SymbolKind, Word};
use gcatalan_core::{Budget, EdgeId, Graph, Vertex};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_graphs(seed: u64, count: usize) -> Vec<Graph> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| fixtures::random_irreducible(&mut rng, 3, 5)).collect()
}

#[test]
fn four_ways_agree_on_random_graphs() {
    let budget = Budget::default();
    let mut graphs = random_graphs(2024, 8);
    graphs.push(fixtures::g3());
    graphs.push(fixtures::loops(2));
    for g in &graphs {
        let table = catalan_table(g, 5);
        for n in 0..=3 {
            for v in g.vertices() {
                let exact = table.get(n, v).clone();
                let words = enumerate_words(g, n, Some(v), &budget).unwrap().len();
                let paths = enumerate_dyck(g, n, Some(v), &budget).unwrap().len();
                let trees = enumerate_trees(g, n, Some(v), &budget).unwrap().len();
                assert_eq!(BigUint::from(words), exact, "words n={n} {v}\n{}", g.to_text());
                assert_eq!(BigUint::from(paths), exact, "paths n={n} {v}");
                assert_eq!(BigUint::from(trees), exact, "trees n={n} {v}");
                assert_eq!(count_trees(g, n, Some(v)), exact, "tree recurrence n={n} {v}");
            }
        }
        for n in 1..=5 {
            assert_eq!(fock_moment(g, n).unwrap(), table.totals[n], "Fock n={n}\n{}", g.to_text());
        }
    }
}

fn all_words(g: &Graph, len: usize) -> Vec<Word> {
    let alphabet: Vec<Symbol> = g.edge_ids().flat_map(|e| [Symbol::star(e), Symbol::plain(e)]).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Symbol>| {
                alphabet.iter().map(move |&s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Word).collect()
}

#[test]
fn brute_force_words() {
    for g in [fixtures::g3(), random_graphs(7, 1).remove(0)] {
        let table = catalan_table(&g, 3);
        for n in 1..=3 {
            let mut counts = vec![0u64; g.num_vertices()];
            for w in all_words(&g, 2 * n) {
                if let Some(v) = is_catalan_word(&w, &g).unwrap() {
                    counts[v.index()] += 1;
                }
            }
            for v in g.vertices() {
                assert_eq!(BigUint::from(counts[v.index()]), *table.get(n, v), "n={n} {v}");
            }
        }
    }
}

#[test]
fn brute_force_dyck_labelings() {
    for g in [fixtures::g3(), random_graphs(9, 1).remove(0)] {
        let table = catalan_table(&g, 3);
        let steps: Vec<Step> = g.edge_ids().flat_map(|e| [Step::up(e), Step::down(e)]).collect();
        for n in 1..=3 {
            let mut counts = vec![0u64; g.num_vertices()];
            let total = steps.len().pow(2 * n as u32);
            for code in 0..total {
                let mut c = code;
                let path: Vec<Step> = (0..2 * n)
                    .map(|_| {
                        let s = steps[c % steps.len()];
                        c /= steps.len();
                        s
                    })
                    .collect();
                if let Ok(root) = (DyckPath { steps: path }).validate(&g) {
                    counts[root.index()] += 1;
                }
            }
            for v in g.vertices() {
                assert_eq!(BigUint::from(counts[v.index()]), *table.get(n, v), "n={n} {v}");
            }
        }
    }
}

/// A basis vector of the path space: a vertex or a nonempty admissible word.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Path {
    At(Vertex),
    Word(Vec<EdgeId>),
}

fn start(g: &Graph, p: &Path) -> Vertex {
    match p {
        Path::At(v) => *v,
        Path::Word(w) => g.source(w[0]),
    }
}

fn act(g: &Graph, s: Symbol, p: Path) -> Option<Path> {
    match s.kind {
        SymbolKind::Plain => {
            if g.target(s.edge) != start(g, &p) {
                return None;
            }
            let mut w = vec![s.edge];
            if let Path::Word(rest) = p {
                w.extend(rest);
            }
            Some(Path::Word(w))
        }
        SymbolKind::Star => match p {
            Path::Word(w) if w[0] == s.edge => {
                Some(if w.len() == 1 { Path::At(g.target(s.edge)) } else { Path::Word(w[1..].to_vec()) })
            }
            _ => None,
        },
    }
}

fn act_word(g: &Graph, w: &Word, p: Path) -> Option<Path> {
    w.symbols().iter().rev().try_fold(p, |p, &s| act(g, s, p))
}

fn act_normal_form(g: &Graph, nf: &NormalForm, p: Path) -> Option<Path> {
    match nf {
        NormalForm::Zero => None,
        NormalForm::Identity => Some(p),
        NormalForm::Term { mu, v, nu } => {
            let mut p = nu.iter().try_fold(p, |p, &e| act(g, Symbol::star(e), p))?;
            if start(g, &p) != *v {
                return None;
            }
            for &e in mu.iter().rev() {
                p = act(g, Symbol::plain(e), p)?;
            }
            Some(p)
        }
    }
}

fn paths_up_to(g: &Graph, len: usize) -> Vec<Path> {
    let mut out: Vec<Path> = g.vertices().map(Path::At).collect();
    let mut frontier: Vec<Vec<EdgeId>> = g.edge_ids().map(|e| vec![e]).collect();
    for _ in 0..len {
        out.extend(frontier.iter().cloned().map(Path::Word));
        frontier = frontier
            .iter()
            .flat_map(|w| {
                g.edge_ids().filter(|&e| g.composable(e, w[0])).map(move |e| {
                    let mut x = vec![e];
                    x.extend(w);
                    x
                })
            })
            .collect();
    }
    out
}

#[test]
fn reduction_matches_path_space_action() {
    let mut rng = StdRng::seed_from_u64(31);
    let mut graphs = random_graphs(5, 6);
    graphs.push(fixtures::g3());
    for g in &graphs {
        let basis = paths_up_to(g, 6);
        for _ in 0..150 {
            let len = rng.gen_range(0..=5);
            let w = Word(
                (0..len)
                    .map(|_| {
                        let e = EdgeId(rng.gen_range(0..g.num_edges()));
                        if rng.gen_bool(0.5) {
                            Symbol::star(e)
                        } else {
                            Symbol::plain(e)
                        }
                    })
                    .collect(),
            );
            let nf = reduce(&w, g);
            for p in &basis {
                assert_eq!(act_word(g, &w, p.clone()), act_normal_form(g, &nf, p.clone()), "{}", w.render(g));
            }
        }
    }
}

#[test]
fn nested_g3_words_by_path_action() {
    let g = fixtures::g3();
    let basis = paths_up_to(&g, 5);
    let inadmissible = Word::parse("e3* e1* e1 e3", &g).unwrap();
    assert!(basis.iter().all(|p| act_word(&g, &inadmissible, p.clone()).is_none()));
    assert_eq!(reduce(&inadmissible, &g), NormalForm::Zero);
    let admissible = Word::parse("e1* e3* e3 e1", &g).unwrap();
    let p1 = NormalForm::projection(Vertex(1));
    for p in &basis {
        assert_eq!(act_word(&g, &admissible, p.clone()), act_normal_form(&g, &p1, p.clone()));
    }
}

fn closure(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.num_vertices();
    let a = g.vertex_matrix();
    let mut r: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || a.at(i, j) > 0).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

fn bool_mul(x: &[Vec<bool>], y: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| x[i][k] && y[k][j])).collect()).collect()
}

#[test]
fn irreducibility_and_aperiodicity_oracles() {
    let mut rng = StdRng::seed_from_u64(77);
    for _ in 0..60 {
        let nv = rng.gen_range(1..=4);
        let g = fixtures::random_valid(&mut rng, nv, nv + 4);
        let irreducible = closure(&g).iter().all(|row| row.iter().all(|&b| b));
        assert_eq!(g.is_irreducible(), irreducible, "{}", g.to_text());
        if !irreducible {
            assert!(g.period().is_err());
            continue;
        }
        // primitive iff some power up to Wielandt's bound is positive
        let am: Vec<Vec<bool>> = g.edge_matrix().rows().iter().map(|r| r.iter().map(|&x| x == 1).collect()).collect();
        let m = am.len();
        let mut power = am.clone();
        let mut primitive = power.iter().all(|r| r.iter().all(|&b| b));
        for _ in 1..((m - 1) * (m - 1) + 1) {
            power = bool_mul(&power, &am);
            primitive |= power.iter().all(|r| r.iter().all(|&b| b));
        }
        assert_eq!(g.is_aperiodic().unwrap(), primitive, "{}", g.to_text());
    }
}

#[test]
fn edge_matrix_pairwise() {
    for g in random_graphs(3, 20) {
        let am = g.edge_matrix();
        for e in g.edges() {
            for f in g.edges() {
                assert_eq!(am.get(e.id, f.id), e.target == f.source);
            }
        }
        let a = g.vertex_matrix();
        for v in g.vertices() {
            let col: u64 = g.vertices().map(|u| a.get(u, v)).sum();
            assert_eq!(col as usize, g.in_edges(v).len());
        }
    }
}
