//! Type D structures over a quiver algebra, stored as labeled directed graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator<A: Algebra> {
    pub name: String,
    pub idem: A::Idem,
    pub grading: Option<A::Grading>,
}

/// Generators plus a differential; an arrow `x → y` labeled `ξ` means `∂x ∋ ξ ⊗ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex<A: Algebra> {
    gens: Vec<Generator<A>>,
    index: HashMap<String, usize>,
    out: Vec<BTreeMap<usize, Element<A>>>,
    inc: Vec<BTreeSet<usize>>,
    // Local-system dimension recorded on an arrow; absent means 1.
    dims: BTreeMap<(usize, usize), u32>,
}

impl<A: Algebra> Default for Complex<A> {
    fn default() -> Self {
        Complex {
            gens: Vec::new(),
            index: HashMap::new(),
            out: Vec::new(),
            inc: Vec::new(),
            dims: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Issue {
    IdempotentMismatch { from: String, to: String, label: String },
    SquareNonzero { from: String, to: String, value: String },
    GradingInconsistent { from: String, to: String, label: String },
    MisplacedGrading { generator: String },
    PartialGrading { generator: String },
    IdentityLoop { generator: String },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::IdempotentMismatch { from, to, label } => {
                write!(f, "arrow {from} -> {to} labeled {label} does not match the endpoint idempotents")
            }
            Issue::SquareNonzero { from, to, value } => {
                write!(f, "d^2 != 0: paths {from} -> {to} sum to {value}")
            }
            Issue::GradingInconsistent { from, to, label } => {
                write!(f, "arrow {from} -> {to} labeled {label} violates the grading rule")
            }
            Issue::MisplacedGrading { generator } => {
                write!(f, "generator {generator} carries a grading in an ungraded idempotent")
            }
            Issue::PartialGrading { generator } => {
                write!(f, "generator {generator} lacks a grading while others have one")
            }
            Issue::IdentityLoop { generator } => {
                write!(f, "generator {generator} has an idempotent self-arrow")
            }
        }
    }
}

/// Every violated invariant of a complex; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.issues.is_empty() {
            Ok(())
        } else {
            let msg: Vec<String> = self.issues.iter().map(|i| i.to_string()).collect();
            Err(Error::InvalidComplex(msg.join("; ")))
        }
    }
}

impl<A: Algebra> Complex<A> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator<A>] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Generator<A> {
        &self.gens[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Adds a generator; fails if the name is already taken.
    pub fn try_add_generator(
        &mut self,
        name: impl Into<String>,
        idem: A::Idem,
        grading: Option<A::Grading>,
    ) -> Result<usize> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::Semantic(format!("duplicate generator {name:?}")));
        }
        let i = self.gens.len();
        self.index.insert(name.clone(), i);
        self.gens.push(Generator { name, idem, grading });
        self.out.push(BTreeMap::new());
        self.inc.push(BTreeSet::new());
        Ok(i)
    }

    /// Adds a generator with a name the caller guarantees to be fresh.
    pub fn add_generator(&mut self, name: impl Into<String>, idem: A::Idem, grading: Option<A::Grading>) -> usize {
        self.try_add_generator(name, idem, grading).expect("fresh generator name")
    }

    pub fn set_grading(&mut self, i: usize, g: Option<A::Grading>) {
        self.gens[i].grading = g;
    }

    /// Adds `label` to the arrow `from → to` over F₂.
    pub fn add_arrow(&mut self, from: usize, to: usize, label: A) {
        self.add_label(from, to, &Element::basic(label));
    }

    pub fn add_label(&mut self, from: usize, to: usize, label: &Element<A>) {
        if label.is_zero() {
            return;
        }
        let e = self.out[from].entry(to).or_default();
        e.add_assign(label);
        if e.is_zero() {
            self.out[from].remove(&to);
            self.inc[to].remove(&from);
            self.dims.remove(&(from, to));
        } else {
            self.inc[to].insert(from);
        }
    }

    pub fn arrow(&self, from: usize, to: usize) -> Option<&Element<A>> {
        self.out[from].get(&to)
    }

    pub fn outgoing(&self, from: usize) -> impl Iterator<Item = (usize, &Element<A>)> + '_ {
        self.out[from].iter().map(|(&t, e)| (t, e))
    }

    pub fn incoming(&self, to: usize) -> impl Iterator<Item = (usize, &Element<A>)> + '_ {
        self.inc[to].iter().map(move |&s| (s, &self.out[s][&to]))
    }

    /// All arrows as `(from, to, label)` in index order.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, &Element<A>)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, m)| m.iter().map(move |(&t, e)| (s, t, e)))
    }

    /// Number of basic summands over all arrows.
    pub fn arrow_count(&self) -> usize {
        self.arrows().map(|(_, _, e)| e.len()).sum()
    }

    pub fn set_dim(&mut self, from: usize, to: usize, dim: u32) {
        if dim <= 1 {
            self.dims.remove(&(from, to));
        } else {
            self.dims.insert((from, to), dim);
        }
    }

    pub fn dim(&self, from: usize, to: usize) -> u32 {
        self.dims.get(&(from, to)).copied().unwrap_or(1)
    }

    pub fn has_local_systems(&self) -> bool {
        !self.dims.is_empty()
    }

    /// Basic summands incident to `i`, counting a self-loop twice.
    pub fn arrow_ends(&self, i: usize) -> usize {
        let o: usize = self.out[i].values().map(|e| e.len()).sum();
        let n: usize = self.inc[i].iter().map(|&s| self.out[s][&i].len()).sum();
        o + n
    }

    pub fn is_graded(&self) -> bool {
        self.gens.iter().any(|g| g.grading.is_some())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        for (s, t, label) in self.arrows() {
            for b in label.terms() {
                if b.source() != self.gens[s].idem || b.target() != self.gens[t].idem {
                    issues.push(Issue::IdempotentMismatch {
                        from: self.gens[s].name.clone(),
                        to: self.gens[t].name.clone(),
                        label: b.name().to_string(),
                    });
                }
                if s == t && b.is_idempotent() {
                    issues.push(Issue::IdentityLoop { generator: self.gens[s].name.clone() });
                }
            }
        }
        for x in 0..self.len() {
            let mut acc: BTreeMap<usize, Element<A>> = BTreeMap::new();
            for (y, first) in self.outgoing(x) {
                for (z, second) in self.outgoing(y) {
                    acc.entry(z).or_default().add_assign(&second.mul(first));
                }
            }
            for (z, v) in acc {
                if !v.is_zero() {
                    issues.push(Issue::SquareNonzero {
                        from: self.gens[x].name.clone(),
                        to: self.gens[z].name.clone(),
                        value: v.to_string(),
                    });
                }
            }
        }
        if self.is_graded() {
            for g in &self.gens {
                match (A::graded_idem(g.idem), g.grading.is_some()) {
                    (false, true) => issues.push(Issue::MisplacedGrading { generator: g.name.clone() }),
                    (true, false) => issues.push(Issue::PartialGrading { generator: g.name.clone() }),
                    _ => {}
                }
            }
            for (s, t, label) in self.arrows() {
                let (Some(gs), Some(gt)) = (&self.gens[s].grading, &self.gens[t].grading) else {
                    continue;
                };
                for b in label.terms() {
                    if A::arrow_consistent(gs, b, gt) == Some(false) {
                        issues.push(Issue::GradingInconsistent {
                            from: self.gens[s].name.clone(),
                            to: self.gens[t].name.clone(),
                            label: b.name().to_string(),
                        });
                    }
                }
            }
        }
        ValidationReport { issues }
    }

    /// Generator indices of each connected component of the undirected arrow graph, ordered by
    /// the smallest generator name in each part.
    pub fn component_indices(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut part = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let nbrs = self.out[x].keys().chain(self.inc[x].iter());
                for &y in nbrs {
                    if !seen[y] {
                        seen[y] = true;
                        part.push(y);
                        queue.push_back(y);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts.sort_by(|a, b| self.min_name(a).cmp(self.min_name(b)));
        parts
    }

    fn min_name(&self, part: &[usize]) -> &str {
        part.iter().map(|&i| self.gens[i].name.as_str()).min().unwrap_or("")
    }

    pub fn connected_components(&self) -> Vec<Complex<A>> {
        self.component_indices().iter().map(|p| self.induced(p)).collect()
    }

    /// The subcomplex spanned by `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> Complex<A> {
        let mut c = Complex::new();
        let mut map = HashMap::new();
        for &i in keep {
            let g = &self.gens[i];
            map.insert(i, c.add_generator(g.name.clone(), g.idem, g.grading));
        }
        for &i in keep {
            for (t, e) in self.outgoing(i) {
                if let Some(&j) = map.get(&t) {
                    c.add_label(map[&i], j, e);
                    c.set_dim(map[&i], j, self.dim(i, t));
                }
            }
        }
        c
    }

    /// Disjoint union; names of `other` get `suffix` appended.
    pub fn disjoint_union(&self, other: &Complex<A>, suffix: &str) -> Complex<A> {
        let mut c = self.clone();
        let base = c.len();
        for g in &other.gens {
            c.add_generator(format!("{}{suffix}", g.name), g.idem, g.grading);
        }
        for (s, t, e) in other.arrows() {
            c.add_label(base + s, base + t, e);
            c.set_dim(base + s, base + t, other.dim(s, t));
        }
        c
    }

    /// Applies `f` to every present grading.
    pub fn map_gradings(&self, f: impl Fn(A::Grading) -> A::Grading) -> Complex<A> {
        let mut c = self.clone();
        for g in &mut c.gens {
            g.grading = g.grading.map(&f);
        }
        c
    }

    pub fn without_gradings(&self) -> Complex<A> {
        let mut c = self.clone();
        for g in &mut c.gens {
            g.grading = None;
        }
        c
    }

    /// Arrows labeled by a single idempotent between distinct generators.
    pub fn identity_arrows(&self) -> Vec<(usize, usize)> {
        self.arrows()
            .filter(|(s, t, e)| s != t && e.as_basic().is_some_and(|b| b.is_idempotent()))
            .map(|(s, t, _)| (s, t))
            .collect()
    }

    /// Cancels identity arrows until none remain, always taking the smallest
    /// `(source name, target name)` first.
    pub fn cancel_identity_arrows(&self) -> Result<Complex<A>> {
        self.cancel_identity_arrows_by(|c, cands| {
            (0..cands.len())
                .min_by(|&i, &j| {
                    let key = |k: usize| (c.name(cands[k].0), c.name(cands[k].1));
                    key(i).cmp(&key(j))
                })
                .expect("nonempty candidate list")
        })
    }

    /// Cancellation with a caller-chosen order; `pick` returns an index into the candidates.
    pub fn cancel_identity_arrows_by(
        &self,
        mut pick: impl FnMut(&Complex<A>, &[(usize, usize)]) -> usize,
    ) -> Result<Complex<A>> {
        self.validate().into_result()?;
        let mut c = self.clone();
        let mut removed = vec![false; c.len()];
        loop {
            let cands = c.identity_arrows();
            if cands.is_empty() {
                break;
            }
            let (u, v) = cands[pick(&c, &cands)];
            c.cancel_one(u, v);
            removed[u] = true;
            removed[v] = true;
        }
        let keep: Vec<usize> = (0..c.len()).filter(|&i| !removed[i]).collect();
        Ok(c.induced(&keep))
    }

    // Zig-zag: each x → v (η) and u → y (ξ) gives x → y labeled ξ·η; then u and v are detached.
    fn cancel_one(&mut self, u: usize, v: usize) {
        let into_v: Vec<(usize, Element<A>)> = self
            .incoming(v)
            .filter(|&(x, _)| x != u && x != v)
            .map(|(x, e)| (x, e.clone()))
            .collect();
        let from_u: Vec<(usize, Element<A>)> = self
            .outgoing(u)
            .filter(|&(y, _)| y != u && y != v)
            .map(|(y, e)| (y, e.clone()))
            .collect();
        for (x, eta) in &into_v {
            for (y, xi) in &from_u {
                self.add_label(*x, *y, &xi.mul(eta));
            }
        }
        for w in [u, v] {
            for t in std::mem::take(&mut self.out[w]).into_keys() {
                self.inc[t].remove(&w);
                self.dims.remove(&(w, t));
            }
            for s in std::mem::take(&mut self.inc[w]) {
                self.out[s].remove(&w);
                self.dims.remove(&(s, w));
            }
        }
    }
}

/// A generator correspondence `a → b` preserving idempotents, arrow labels and (optionally)
/// gradings, or `None` if the complexes are not isomorphic.
pub fn isomorphism<A: Algebra>(a: &Complex<A>, b: &Complex<A>, graded: bool) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.arrow_count() != b.arrow_count() {
        return None;
    }
    let sig = |c: &Complex<A>, i: usize| {
        let outs: BTreeSet<Element<A>> = c.outgoing(i).map(|(_, e)| e.clone()).collect();
        let ins: BTreeSet<Element<A>> = c.incoming(i).map(|(_, e)| e.clone()).collect();
        (c.out[i].len(), c.inc[i].len(), outs, ins)
    };
    let sa: Vec<_> = (0..a.len()).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..b.len()).map(|i| sig(b, i)).collect();
    let compatible = |i: usize, j: usize| {
        a.gens[i].idem == b.gens[j].idem
            && (!graded || a.gens[i].grading == b.gens[j].grading)
            && sa[i] == sb[j]
    };

    // Breadth-first order inside each component so that every later vertex has a placed neighbor.
    let mut order = Vec::with_capacity(a.len());
    let mut parent: Vec<Option<usize>> = vec![None; a.len()];
    let mut seen = vec![false; a.len()];
    for root in 0..a.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(x) = q.pop_front() {
            order.push(x);
            for &y in a.out[x].keys().chain(a.inc[x].iter()) {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    q.push_back(y);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    if extend(a, b, &order, &parent, 0, &mut map, &mut used, &compatible) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend<A: Algebra>(
    a: &Complex<A>,
    b: &Complex<A>,
    order: &[usize],
    parent: &[Option<usize>],
    k: usize,
    map: &mut [usize],
    used: &mut [bool],
    compatible: &dyn Fn(usize, usize) -> bool,
) -> bool {
    if k == order.len() {
        return true;
    }
    let x = order[k];
    let cands: Vec<usize> = match parent[x] {
        Some(p) => {
            let mp = map[p];
            let mut v: Vec<usize> = b.out[mp].keys().chain(b.inc[mp].iter()).copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        }
        None => (0..b.len()).collect(),
    };
    for y in cands {
        if used[y] || !compatible(x, y) {
            continue;
        }
        let consistent = order[..k].iter().chain(std::iter::once(&x)).all(|&z| {
            let mz = if z == x { y } else { map[z] };
            a.arrow(x, z) == b.arrow(y, mz) && a.arrow(z, x) == b.arrow(mz, y)
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend(a, b, order, parent, k + 1, map, used, compatible) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}
