//! Congruence closure over ground terms where each `rd(a, i)` is read as `f_a(i)`.
//! Merges carry reasons, so every derived equality can be explained by input literals.

use std::collections::{BTreeSet, HashMap};

use crate::kernel::{Op, TermId, TermStore};

/// Index of an input literal of the ground problem.
pub type LitId = usize;

#[derive(Clone, Debug)]
pub enum Reason {
    Lit(LitId),
    /// Two reads of one array whose indexes are equal.
    Congruence(usize, usize),
    /// An equality derived by the order layer, with its supporting literals.
    Derived(Vec<LitId>),
}

#[derive(Clone, Debug)]
pub struct CongruenceState {
    terms: Vec<TermId>,
    node_of: HashMap<TermId, usize>,
    rep: Vec<usize>,
    members: Vec<Vec<usize>>,
    /// For a read node: the array term and the node of its index.
    app: Vec<Option<(TermId, usize)>>,
    /// For an index class representative: the reads whose index lies in the class.
    uses: Vec<Vec<usize>>,
    signatures: HashMap<(TermId, usize), usize>,
    proof: Vec<Option<(usize, Reason)>>,
    diseqs: Vec<(usize, usize, LitId)>,
    pending: Vec<(usize, usize, Reason)>,
    preferred: Vec<bool>,
}

impl Default for CongruenceState {
    fn default() -> Self {
        Self::new()
    }
}

impl CongruenceState {
    pub fn new() -> Self {
        CongruenceState {
            terms: Vec::new(),
            node_of: HashMap::new(),
            rep: Vec::new(),
            members: Vec::new(),
            app: Vec::new(),
            uses: Vec::new(),
            signatures: HashMap::new(),
            proof: Vec::new(),
            diseqs: Vec::new(),
            pending: Vec::new(),
            preferred: Vec::new(),
        }
    }

    /// Registers `t` and its index/element subterms; returns its node.
    pub fn add_term(&mut self, store: &TermStore, t: TermId) -> usize {
        if let Some(&n) = self.node_of.get(&t) {
            return n;
        }
        let app = match store.op(t) {
            Op::Rd => {
                let i = store.args(t)[1];
                Some((store.args(t)[0], self.add_term(store, i)))
            }
            Op::Succ | Op::Pred => {
                self.add_term(store, store.args(t)[0]);
                None
            }
            _ => None,
        };
        let n = self.terms.len();
        self.terms.push(t);
        self.node_of.insert(t, n);
        self.rep.push(n);
        self.members.push(vec![n]);
        self.app.push(app);
        self.uses.push(Vec::new());
        self.proof.push(None);
        self.preferred.push(false);
        if let Some((a, i)) = app {
            let ri = self.rep[i];
            self.uses[ri].push(n);
            match self.signatures.get(&(a, ri)) {
                Some(&other) => self.pending.push((n, other, Reason::Congruence(n, other))),
                None => {
                    self.signatures.insert((a, ri), n);
                }
            }
        }
        n
    }

    /// Marks terms preferred as class labels (used for AB-common representatives).
    pub fn set_preferred(&mut self, pred: impl Fn(TermId) -> bool) {
        for (n, &t) in self.terms.iter().enumerate() {
            self.preferred[n] = pred(t);
        }
    }

    pub fn node(&self, t: TermId) -> Option<usize> {
        self.node_of.get(&t).copied()
    }

    pub fn term(&self, n: usize) -> TermId {
        self.terms[n]
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn find(&self, n: usize) -> usize {
        self.rep[n]
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.rep[a] == self.rep[b]
    }

    pub fn members(&self, n: usize) -> &[usize] {
        &self.members[self.rep[n]]
    }

    /// The class label: a preferred member if any, else the member with the smallest term id.
    pub fn label(&self, n: usize) -> TermId {
        let ms = self.members(n);
        let best = ms
            .iter()
            .copied()
            .min_by_key(|&m| (!self.preferred[m], self.terms[m]))
            .unwrap();
        self.terms[best]
    }

    pub fn app(&self, n: usize) -> Option<(TermId, usize)> {
        self.app[n]
    }

    pub fn diseqs(&self) -> &[(usize, usize, LitId)] {
        &self.diseqs
    }

    pub fn assert_eq(&mut self, a: usize, b: usize, reason: Reason) {
        self.pending.push((a, b, reason));
    }

    pub fn assert_ne(&mut self, a: usize, b: usize, lit: LitId) {
        self.diseqs.push((a, b, lit));
    }

    /// Processes pending merges to congruence closure. On conflict returns the literals of
    /// a violated disequality together with the explanation of its two sides' equality.
    pub fn propagate(&mut self) -> Result<(), Vec<LitId>> {
        while let Some((a, b, reason)) = self.pending.pop() {
            self.merge(a, b, reason);
        }
        for &(a, b, lit) in &self.diseqs {
            if self.same(a, b) {
                let mut out = self.explain(a, b);
                out.push(lit);
                out.sort_unstable();
                out.dedup();
                return Err(out);
            }
        }
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, reason: Reason) {
        let (ra, rb) = (self.rep[a], self.rep[b]);
        if ra == rb {
            return;
        }
        self.reroot(a);
        self.proof[a] = Some((b, reason));
        let (small, large) = if self.members[ra].len() < self.members[rb].len() {
            (ra, rb)
        } else {
            (rb, ra)
        };
        let moved = std::mem::take(&mut self.members[small]);
        for &m in &moved {
            self.rep[m] = large;
        }
        self.members[large].extend(moved);
        let uses = std::mem::take(&mut self.uses[small]);
        for &u in &uses {
            let (arr, _) = self.app[u].unwrap();
            self.signatures.remove(&(arr, small));
            match self.signatures.get(&(arr, large)) {
                Some(&v) if !self.same(u, v) => {
                    self.pending.push((u, v, Reason::Congruence(u, v)));
                }
                Some(_) => {}
                None => {
                    self.signatures.insert((arr, large), u);
                }
            }
        }
        self.uses[large].extend(uses);
    }

    fn reroot(&mut self, n: usize) {
        let mut prev: Option<(usize, Reason)> = None;
        let mut cur = n;
        loop {
            let next = self.proof[cur].take();
            if let Some((p, r)) = prev {
                self.proof[cur] = Some((p, r));
            }
            match next {
                Some((parent, r)) => {
                    prev = Some((cur, r));
                    cur = parent;
                }
                None => break,
            }
        }
    }

    /// Input literals that imply `a = b`; both nodes must be in one class.
    pub fn explain(&self, a: usize, b: usize) -> Vec<LitId> {
        let mut out = BTreeSet::new();
        let mut seen = std::collections::HashSet::new();
        self.explain_into(a, b, &mut out, &mut seen);
        out.into_iter().collect()
    }

    fn explain_into(
        &self,
        a: usize,
        b: usize,
        out: &mut BTreeSet<LitId>,
        seen: &mut std::collections::HashSet<(usize, usize)>,
    ) {
        if a == b || !seen.insert((a.min(b), a.max(b))) {
            return;
        }
        debug_assert!(self.same(a, b), "explaining an underived equality");
        let mut ancestors = std::collections::HashSet::new();
        let mut cur = a;
        ancestors.insert(cur);
        while let Some((p, _)) = &self.proof[cur] {
            cur = *p;
            ancestors.insert(cur);
        }
        let mut lca = b;
        while !ancestors.contains(&lca) {
            lca = self.proof[lca].as_ref().unwrap().0;
        }
        for start in [a, b] {
            let mut cur = start;
            while cur != lca {
                let (p, r) = self.proof[cur].as_ref().unwrap();
                match r {
                    Reason::Lit(l) => {
                        out.insert(*l);
                    }
                    Reason::Congruence(u, v) => {
                        let (iu, iv) = (self.app[*u].unwrap().1, self.app[*v].unwrap().1);
                        self.explain_into(iu, iv, out, seen);
                    }
                    Reason::Derived(ls) => out.extend(ls.iter().copied()),
                }
                cur = *p;
            }
        }
    }
}
