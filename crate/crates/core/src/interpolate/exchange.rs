//! Interpolation of an inconsistent pair of ground literal sets by exchanging facts over
//! shared terms. Each side sends the facts it entails that the other side's current model
//! violates, every fact carrying the received facts it depends on. Once one side becomes
//! inconsistent the interpolant is read off the facts sent by `A`.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::kernel::{Formula, IndexTheory, Literal, Op, Sort, TermId, TermStore, VarId};
use crate::toeuf::{check_ground_with, Color, GroundModel, GroundVerdict};

/// Shared terms facts may talk about: `0` and common index variables; `bot`, common element
/// variables and reads of common arrays at the shared index terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub index: Vec<TermId>,
    pub elem: Vec<TermId>,
}

impl Vocabulary {
    pub fn new(store: &mut TermStore, lits: &[Literal], common: &BTreeSet<VarId>) -> Self {
        let mut subterms = Vec::new();
        for l in lits {
            for t in l.atom.terms() {
                store.collect_subterms(t, &mut subterms);
            }
        }
        let shared = |store: &TermStore, t: TermId| store.var_of(t).is_some_and(|v| common.contains(&v));
        let mut index = vec![store.zero()];
        let mut elem = vec![store.bot()];
        let mut arrays = Vec::new();
        for &t in &subterms {
            match store.op(t) {
                Op::Var(_) if shared(store, t) => {
                    let list = match store.sort(t) {
                        Sort::Index => &mut index,
                        Sort::Elem => &mut elem,
                        Sort::Array => &mut arrays,
                    };
                    if !list.contains(&t) {
                        list.push(t);
                    }
                }
                Op::Rd => {
                    let a = store.args(t)[0];
                    if shared(store, a) && !arrays.contains(&a) {
                        arrays.push(a);
                    }
                }
                _ => {}
            }
        }
        for &a in &arrays {
            for &i in &index {
                let r = store.rd(a, i);
                elem.push(r);
            }
        }
        Vocabulary { index, elem }
    }

    pub fn terms(&self) -> Vec<TermId> {
        self.index.iter().chain(&self.elem).copied().collect()
    }
}

#[derive(Clone, Debug)]
struct Fact {
    lit: Literal,
    from: Color,
    premises: Vec<usize>,
}

/// Which facts may be exchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Language {
    /// Equalities and disequalities only.
    Equalities,
    /// Also strict and non-strict order facts (and difference bounds under difference logic).
    Full,
}

struct Exchange<'a> {
    store: &'a mut TermStore,
    theory: IndexTheory,
    a: &'a [Literal],
    b: &'a [Literal],
    voc: Vocabulary,
    cover: Vec<TermId>,
    facts: Vec<Fact>,
    sent: HashSet<Literal>,
}

enum State {
    Consistent(GroundModel),
    Conflict(Vec<usize>),
}

/// An interpolant for `a` and `b` whose atoms are built from the vocabulary of `common`,
/// or `None` if the exchange stops without a conflict.
pub fn combine_interpolants(
    store: &mut TermStore,
    theory: IndexTheory,
    a: &[Literal],
    b: &[Literal],
    common: &BTreeSet<VarId>,
    language: Language,
) -> Result<Option<Formula>> {
    let all: Vec<Literal> = a.iter().chain(b).copied().collect();
    let voc = Vocabulary::new(store, &all, common);
    let cover = voc.terms();
    let mut ex = Exchange {
        store,
        theory,
        a,
        b,
        voc,
        cover,
        facts: Vec::new(),
        sent: HashSet::new(),
    };
    ex.run(language)
}

/// Interpolation of a congruence conflict: only equalities and disequalities between
/// shared terms cross sides. A class mixing both sides with no shared member is a bug.
pub fn euf_interpolate(
    store: &mut TermStore,
    theory: IndexTheory,
    a: &[Literal],
    b: &[Literal],
    common: &BTreeSet<VarId>,
) -> Result<Formula> {
    combine_interpolants(store, theory, a, b, common, Language::Equalities)?
        .ok_or_else(|| Error::internal("a class mixing both sides has no shared member"))
}

impl Exchange<'_> {
    fn own(&self, side: Color) -> &[Literal] {
        match side {
            Color::A => self.a,
            Color::B => self.b,
        }
    }

    /// Facts received by `side`, in creation order.
    fn received(&self, side: Color) -> Vec<usize> {
        (0..self.facts.len()).filter(|&k| self.facts[k].from != side).collect()
    }

    fn knowledge(&self, side: Color) -> (Vec<Literal>, Vec<usize>) {
        let recv = self.received(side);
        let mut lits = self.own(side).to_vec();
        lits.extend(recv.iter().map(|&k| self.facts[k].lit));
        (lits, recv)
    }

    /// Received facts among the literal ids of a core over `knowledge(side)`.
    fn premises(&self, side: Color, core: &[usize], recv: &[usize]) -> Vec<usize> {
        let own = self.own(side).len();
        let mut out: Vec<usize> = core
            .iter()
            .filter(|&&i| i >= own && i < own + recv.len())
            .map(|&i| recv[i - own])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn state(&mut self, side: Color) -> Result<State> {
        let (lits, recv) = self.knowledge(side);
        Ok(match check_ground_with(self.store, self.theory, &lits, &self.cover)? {
            GroundVerdict::Sat(m) => State::Consistent(m),
            GroundVerdict::Unsat(core) => State::Conflict(self.premises(side, &core.lits, &recv)),
        })
    }

    /// The received facts that make `side` entail `lit`, if it does.
    fn entails(&mut self, side: Color, lit: Literal) -> Result<Option<Vec<usize>>> {
        let (mut lits, recv) = self.knowledge(side);
        let neg = lits.len();
        lits.push(lit.negate());
        Ok(match check_ground_with(self.store, self.theory, &lits, &[])? {
            GroundVerdict::Sat(_) => None,
            GroundVerdict::Unsat(core) => {
                let core: Vec<usize> = core.lits.into_iter().filter(|&i| i != neg).collect();
                Some(self.premises(side, &core, &recv))
            }
        })
    }

    /// Candidate facts tagged with their phase: index (dis)equalities, element
    /// (dis)equalities, then order facts.
    fn candidates(&mut self, model: &GroundModel, language: Language) -> Vec<(u8, Literal)> {
        let mut out = Vec::new();
        let idx = self.voc.index.clone();
        let elem = self.voc.elem.clone();
        for (n, &s) in idx.iter().enumerate() {
            for &t in &idx[n + 1..] {
                out.push((0, Literal::eq(self.store, s, t)));
                out.push((0, Literal::ne(self.store, s, t)));
            }
        }
        for (n, &s) in elem.iter().enumerate() {
            for &t in &elem[n + 1..] {
                out.push((1, Literal::eq(self.store, s, t)));
                out.push((1, Literal::ne(self.store, s, t)));
            }
        }
        if language == Language::Full {
            for (n, &s) in idx.iter().enumerate() {
                for &t in &idx[n + 1..] {
                    out.extend([Literal::lt(s, t), Literal::lt(t, s), Literal::le(s, t), Literal::le(t, s)].map(|l| (2, l)));
                }
            }
            if self.theory == IndexTheory::DifferenceLogic {
                for &s in &idx {
                    for &t in &idx {
                        let (Some(vs), Some(vt)) = (model.index_value(self.store, s), model.index_value(self.store, t))
                        else {
                            continue;
                        };
                        if s != t && (vs - vt).abs() > 1 {
                            let bound = self.store.shift(t, vs - vt);
                            out.push((2, Literal::le(s, bound)));
                        }
                    }
                }
            }
        }
        out.retain(|(_, l)| l.trivial_value().is_none());
        out
    }

    fn send(&mut self, from: Color, lit: Literal, premises: Vec<usize>) {
        self.sent.insert(lit);
        self.facts.push(Fact { lit, from, premises });
    }

    /// Sends the facts `side` entails and the other side's model violates, from the first
    /// phase that has any.
    /// Returns whether anything was sent, or the conflict if a side is already inconsistent.
    fn round(&mut self, side: Color, language: Language) -> Result<std::result::Result<bool, (Color, Vec<usize>)>> {
        let other = other(side);
        let mine = match self.state(side)? {
            State::Conflict(p) => return Ok(Err((side, p))),
            State::Consistent(m) => m,
        };
        let theirs = match self.state(other)? {
            State::Conflict(p) => return Ok(Err((other, p))),
            State::Consistent(m) => m,
        };
        let cands = self.candidates(&mine, language);
        let mut sent_any = false;
        for phase in 0..3 {
            for &(p, lit) in &cands {
                if p != phase || self.sent.contains(&lit) {
                    continue;
                }
                if mine.eval_lit(self.store, &lit) != Some(true) || theirs.eval_lit(self.store, &lit) == Some(true) {
                    continue;
                }
                if let Some(p) = self.entails(side, lit)? {
                    self.send(side, lit, p);
                    sent_any = true;
                }
            }
            if sent_any {
                break;
            }
        }
        Ok(Ok(sent_any))
    }

    /// Facts `side` entails that the other side does not, regardless of models.
    fn exhaustive_round(&mut self, side: Color, language: Language) -> Result<bool> {
        let mine = match self.state(side)? {
            State::Conflict(_) => return Ok(true),
            State::Consistent(m) => m,
        };
        let cands = self.candidates(&mine, language);
        for (_, lit) in cands {
            if self.sent.contains(&lit) || mine.eval_lit(self.store, &lit) == Some(false) {
                continue;
            }
            if self.entails(other(side), lit)?.is_some() {
                continue;
            }
            if let Some(p) = self.entails(side, lit)? {
                self.send(side, lit, p);
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn run(&mut self, language: Language) -> Result<Option<Formula>> {
        loop {
            let mut progress = false;
            for side in [Color::A, Color::B] {
                match self.round(side, language)? {
                    Err((loser, premises)) => return Ok(Some(self.assemble(loser, &premises))),
                    Ok(sent) => progress |= sent,
                }
            }
            if !progress && !self.exhaustive_round(Color::A, language)? && !self.exhaustive_round(Color::B, language)? {
                return Ok(None);
            }
        }
    }

    /// `AND (premises -> fact)` over the `A` facts the conflict depends on, plus the negated
    /// premises of the final conflict when it is on the `A` side.
    fn assemble(&self, loser: Color, premises: &[usize]) -> Formula {
        let mut cone = BTreeSet::new();
        let mut stack = premises.to_vec();
        while let Some(k) = stack.pop() {
            if cone.insert(k) {
                stack.extend(&self.facts[k].premises);
            }
        }
        let lits_of = |ps: &[usize]| Formula::conj(ps.iter().map(|&k| self.facts[k].lit));
        let mut parts: Vec<Formula> = cone
            .iter()
            .filter(|&&k| self.facts[k].from == Color::A)
            .map(|&k| Formula::implies(lits_of(&self.facts[k].premises), Formula::Lit(self.facts[k].lit)))
            .collect();
        if loser == Color::A {
            parts.push(Formula::not(lits_of(premises)));
        }
        Formula::and(parts)
    }
}

fn other(c: Color) -> Color {
    match c {
        Color::A => Color::B,
        Color::B => Color::A,
    }
}
