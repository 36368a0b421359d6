//! Case splitting over ground formulas: the literal part is solved directly and disjunctions
//! violated by the current model are split, with backjumping over irrelevant splits.

use std::collections::BTreeSet;

use super::ground::{solve, GroundModel, GroundOutcome, Skeleton};
use crate::error::Result;
use crate::kernel::{Formula, IndexTheory, Literal, Sort, TermId, TermStore, VarId};

/// The side a formula belongs to in an interpolation problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    A,
    B,
}

/// Who owns a case split: one side, or neither when a split generated by difference logic
/// mixes symbols local to both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitColor {
    Side(Color),
    Mixed,
}

/// A refutation tree. Leaves hold an unsatisfiable set of colored literals and the conflict
/// shape, with literal ids in the skeleton indexing into `lits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    Leaf {
        lits: Vec<(Literal, Color)>,
        skeleton: Skeleton,
    },
    Split {
        color: SplitColor,
        disjuncts: Vec<Formula>,
        children: Vec<Proof>,
    },
}

impl Proof {
    pub fn leaves(&self) -> usize {
        match self {
            Proof::Leaf { .. } => 1,
            Proof::Split { children, .. } => children.iter().map(Proof::leaves).sum(),
        }
    }

    /// Every literal used at some leaf.
    pub fn core(&self) -> Vec<(Literal, Color)> {
        let mut out = Vec::new();
        self.collect_core(&mut out);
        out
    }

    fn collect_core(&self, out: &mut Vec<(Literal, Color)>) {
        match self {
            Proof::Leaf { lits, .. } => {
                for l in lits {
                    if !out.contains(l) {
                        out.push(*l);
                    }
                }
            }
            Proof::Split { children, .. } => {
                for c in children {
                    c.collect_core(out);
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Sat(GroundModel),
    Unsat(Proof),
}

/// Symbols owned by each side, used to color the splits that difference logic generates.
#[derive(Clone, Debug, Default)]
pub struct Ownership {
    pub a: BTreeSet<VarId>,
    pub b: BTreeSet<VarId>,
}

impl Ownership {
    fn color_of(&self, store: &TermStore, terms: &[TermId]) -> SplitColor {
        let mut vars = BTreeSet::new();
        for &t in terms {
            store.collect_vars(t, &mut vars);
        }
        if vars.is_subset(&self.a) {
            SplitColor::Side(Color::A)
        } else if vars.is_subset(&self.b) {
            SplitColor::Side(Color::B)
        } else {
            SplitColor::Mixed
        }
    }
}

#[derive(Clone)]
struct Unit {
    lit: Literal,
    color: Color,
    level: usize,
}

#[derive(Clone)]
struct Pending {
    disjuncts: Vec<Formula>,
    color: Color,
    level: usize,
}

#[derive(Clone, Default)]
struct Node {
    units: Vec<Unit>,
    pending: Vec<Pending>,
}

impl Node {
    fn add(&mut self, store: &TermStore, f: &Formula, color: Color, level: usize) {
        match f {
            Formula::True => {}
            Formula::False => {
                let z = store.zero();
                self.units.push(Unit {
                    lit: Literal::lt(z, z),
                    color,
                    level,
                });
            }
            Formula::Lit(l) => self.units.push(Unit {
                lit: *l,
                color,
                level,
            }),
            Formula::And(gs) => {
                for g in gs {
                    self.add(store, g, color, level);
                }
            }
            Formula::Or(gs) => self.pending.push(Pending {
                disjuncts: gs.clone(),
                color,
                level,
            }),
            Formula::Not(_) => self.add(store, &f.nnf(), color, level),
        }
    }
}

struct Searcher<'a> {
    store: &'a mut TermStore,
    theory: IndexTheory,
    owners: &'a Ownership,
    extra: Vec<TermId>,
}

enum Step {
    Sat(GroundModel),
    Unsat(Proof, BTreeSet<usize>),
}

/// Decides a conjunction of colored ground formulas. The store is only extended with terms
/// for the order splits that difference logic may request.
pub fn search(
    store: &mut TermStore,
    theory: IndexTheory,
    items: &[(Formula, Color)],
    owners: &Ownership,
) -> Result<SearchOutcome> {
    search_with(store, theory, items, owners, &[])
}

/// Like [`search`], with additional terms the returned model must cover.
pub fn search_with(
    store: &mut TermStore,
    theory: IndexTheory,
    items: &[(Formula, Color)],
    owners: &Ownership,
    covered: &[TermId],
) -> Result<SearchOutcome> {
    let mut root = Node::default();
    let mut extra = covered.to_vec();
    for (f, c) in items {
        root.add(store, f, *c, 0);
        extra.extend(f.subterms(store));
    }
    let mut seen = std::collections::HashSet::new();
    extra.retain(|t| store.sort(*t) != Sort::Array && seen.insert(*t));
    let mut s = Searcher {
        store,
        theory,
        owners,
        extra,
    };
    Ok(match s.run(root, 0)? {
        Step::Sat(m) => SearchOutcome::Sat(m),
        Step::Unsat(p, _) => SearchOutcome::Unsat(p),
    })
}

impl Searcher<'_> {
    fn run(&mut self, node: Node, level: usize) -> Result<Step> {
        let lits: Vec<Literal> = node.units.iter().map(|u| u.lit).collect();
        match solve(self.store, self.theory, &lits, &self.extra)? {
            GroundOutcome::Unsat(core) => {
                let deps = core.lits.iter().map(|&i| node.units[i].level).collect();
                let remap: std::collections::HashMap<usize, usize> =
                    core.lits.iter().enumerate().map(|(k, &i)| (i, k)).collect();
                let skeleton = match core.skeleton {
                    Skeleton::Congruence { diseq } => Skeleton::Congruence { diseq: remap[&diseq] },
                    Skeleton::Cycle(edges) => Skeleton::Cycle(
                        edges
                            .into_iter()
                            .map(|mut e| {
                                e.lit = e.lit.map(|l| remap[&l]);
                                e
                            })
                            .collect(),
                    ),
                };
                let lits = core
                    .lits
                    .iter()
                    .map(|&i| (node.units[i].lit, node.units[i].color))
                    .collect();
                Ok(Step::Unsat(Proof::Leaf { lits, skeleton }, deps))
            }
            GroundOutcome::Split(x, y) => {
                let color = self.owners.color_of(self.store, &[x, y]);
                let disjuncts = vec![
                    Formula::Lit(Literal::lt(x, y)),
                    Formula::Lit(Literal::lt(y, x)),
                    Formula::Lit(Literal::eq(self.store, x, y)),
                ];
                let side = match color {
                    SplitColor::Side(c) => c,
                    SplitColor::Mixed => Color::A,
                };
                self.split(&node, None, disjuncts, side, color, level)
            }
            GroundOutcome::Sat(model) => {
                let mut best: Option<(usize, usize)> = None;
                for (n, p) in node.pending.iter().enumerate() {
                    let f = Formula::Or(p.disjuncts.clone());
                    let v = f.eval3(&mut |l| model.eval_lit(self.store, l));
                    if v != Some(true) && best.is_none_or(|(_, len)| p.disjuncts.len() < len) {
                        best = Some((n, p.disjuncts.len()));
                    }
                }
                let Some((n, _)) = best else {
                    return Ok(Step::Sat(model));
                };
                let p = node.pending[n].clone();
                let mut rest = node;
                rest.pending.remove(n);
                self.split(&rest, Some(p.level), p.disjuncts, p.color, SplitColor::Side(p.color), level)
            }
        }
    }

    fn split(
        &mut self,
        node: &Node,
        origin: Option<usize>,
        disjuncts: Vec<Formula>,
        side: Color,
        color: SplitColor,
        level: usize,
    ) -> Result<Step> {
        let here = level + 1;
        let mut children = Vec::new();
        let mut deps = BTreeSet::new();
        for d in &disjuncts {
            let mut child = node.clone();
            child.add(self.store, d, side, here);
            for t in d.subterms(self.store) {
                if self.store.sort(t) != Sort::Array && !self.extra.contains(&t) {
                    self.extra.push(t);
                }
            }
            match self.run(child, here)? {
                Step::Sat(m) => return Ok(Step::Sat(m)),
                Step::Unsat(p, d) if !d.contains(&here) => return Ok(Step::Unsat(p, d)),
                Step::Unsat(p, d) => {
                    deps.extend(d.into_iter().filter(|&l| l != here));
                    children.push(p);
                }
            }
        }
        deps.extend(origin);
        Ok(Step::Unsat(
            Proof::Split {
                color,
                disjuncts,
                children,
            },
            deps,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_split_finds_model() {
        let mut s = TermStore::new();
        let i = s.declare("i", Sort::Index).unwrap();
        let j = s.declare("j", Sort::Index).unwrap();
        let (i, j) = (s.var_term(i), s.var_term(j));
        let f = Formula::and([
            Formula::clause([Literal::lt(i, j), Literal::lt(j, i)]),
            Formula::Lit(Literal::le(i, j)),
        ]);
        let out = search(&mut s, IndexTheory::TotalOrder, &[(f, Color::A)], &Ownership::default()).unwrap();
        let SearchOutcome::Sat(m) = out else { panic!("expected sat") };
        assert!(m.index[&i] < m.index[&j]);
    }

    #[test]
    fn refutation_has_one_leaf_per_branch() {
        let mut s = TermStore::new();
        let i = s.declare("i", Sort::Index).unwrap();
        let j = s.declare("j", Sort::Index).unwrap();
        let (i, j) = (s.var_term(i), s.var_term(j));
        let items = [
            (Formula::clause([Literal::lt(i, j), Literal::lt(j, i)]), Color::A),
            (Formula::Lit(Literal::eq(&s, i, j)), Color::B),
        ];
        let out = search(&mut s, IndexTheory::TotalOrder, &items, &Ownership::default()).unwrap();
        let SearchOutcome::Unsat(p) = out else { panic!("expected unsat") };
        assert_eq!(p.leaves(), 2);
    }

    #[test]
    fn backjump_skips_irrelevant_split() {
        let mut s = TermStore::new();
        let v: Vec<TermId> = ["i", "j", "k", "l"]
            .iter()
            .map(|n| {
                let x = s.declare(n, Sort::Index).unwrap();
                s.var_term(x)
            })
            .collect();
        let items = [
            (Formula::clause([Literal::lt(v[2], v[3]), Literal::lt(v[3], v[2])]), Color::A),
            (Formula::Lit(Literal::lt(v[0], v[1])), Color::A),
            (Formula::Lit(Literal::lt(v[1], v[0])), Color::B),
        ];
        let out = search(&mut s, IndexTheory::TotalOrder, &items, &Ownership::default()).unwrap();
        let SearchOutcome::Unsat(p) = out else { panic!("expected unsat") };
        assert_eq!(p.leaves(), 1);
    }
}
