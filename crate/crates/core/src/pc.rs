//! Power-commutator presentations of finite p-groups and the structural
//! algorithms run on them.
//!
//! Elements are indexed by their normal form `g_1^e_1 ... g_n^e_n` as
//! `sum e_k p^(k-1)`, so the first generator is the least significant digit.
//! Right multiplication by each generator is tabulated once by collection and the
//! tables are then proved to define a group of order `p^n`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use crate::arith::{is_prime, log_p, phi_prime_power};
use crate::error::{Error, Result};

/// Index of an element in its group's normal-form enumeration.
pub type Elem = u32;

/// Primes accepted by the engine.
pub const SUPPORTED_PRIMES: [u32; 3] = [3, 5, 7];
/// Largest number of pc-generators.
pub const MAX_GENS: usize = 5;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

/// A power-commutator presentation with relations `g_i^p = w_i` and
/// `[g_j, g_i] = w_ji` (`j > i`) whose right-hand sides use later generators only.
///
/// Generators are numbered from 0 internally; the text format numbers them from 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PcPresentation {
    p: u32,
    ngens: usize,
    powers: Vec<Vec<u32>>,
    commutators: Vec<Vec<u32>>,
}

fn comm_slot(j: usize, i: usize) -> usize {
    j * (j - 1) / 2 + i
}

impl PcPresentation {
    /// The elementary abelian presentation on `ngens` generators.
    pub fn new(p: u32, ngens: usize) -> Result<Self> {
        if !is_prime(p as u64) || p == 2 {
            return Err(Error::Usage(format!("{p} is not an odd prime")));
        }
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(Error::Capacity(format!("prime {p} is outside the supported set {SUPPORTED_PRIMES:?}")));
        }
        if ngens > MAX_GENS {
            return Err(Error::Capacity(format!("{ngens} generators exceed the limit of {MAX_GENS}")));
        }
        Ok(PcPresentation {
            p,
            ngens,
            powers: vec![vec![0; ngens]; ngens],
            commutators: vec![vec![0; ngens]; ngens * ngens.saturating_sub(1) / 2],
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    fn check_rhs(&self, after: usize, w: &[u32]) -> Result<()> {
        if w.len() != self.ngens {
            return Err(Error::Presentation(format!("relation vector has length {}, expected {}", w.len(), self.ngens)));
        }
        if let Some(k) = (0..=after).find(|&k| w[k] != 0) {
            return Err(Error::Presentation(format!("relation uses generator {} which is not later than {}", k + 1, after + 1)));
        }
        if w.iter().any(|&e| e >= self.p) {
            return Err(Error::Presentation(format!("exponent out of range [0, {})", self.p)));
        }
        Ok(())
    }

    /// Sets `g_i^p = w`.
    pub fn set_power(&mut self, i: usize, w: &[u32]) -> Result<()> {
        if i >= self.ngens {
            return Err(Error::Usage(format!("no generator {}", i + 1)));
        }
        self.check_rhs(i, w)?;
        self.powers[i] = w.to_vec();
        Ok(())
    }

    /// Sets `[g_j, g_i] = w` for `j > i`.
    pub fn set_commutator(&mut self, j: usize, i: usize, w: &[u32]) -> Result<()> {
        if j >= self.ngens || i >= j {
            return Err(Error::Usage(format!("commutator [g{}, g{}] needs j > i", j + 1, i + 1)));
        }
        self.check_rhs(j, w)?;
        self.commutators[comm_slot(j, i)] = w.to_vec();
        Ok(())
    }

    pub fn power(&self, i: usize) -> &[u32] {
        &self.powers[i]
    }

    pub fn commutator(&self, j: usize, i: usize) -> &[u32] {
        &self.commutators[comm_slot(j, i)]
    }

    /// Group order `p^ngens`.
    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.ngens as u32)
    }
}

/// An element tagged with the identity of the group it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: u64,
    index: Elem,
}

impl GroupElement {
    pub fn index(&self) -> Elem {
        self.index
    }
}

/// A subgroup stored by its sorted member list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    gens: Vec<Elem>,
    members: Vec<Elem>,
    mask: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl Subgroup {
    fn from_members(gens: Vec<Elem>, mut members: Vec<Elem>, group_order: usize) -> Self {
        members.sort_unstable();
        let mut mask = vec![false; group_order];
        for &m in &members {
            mask[m as usize] = true;
        }
        Subgroup { gens, members, mask }
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.mask[x as usize]
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }
}

/// Conjugacy classes with representatives at the least element index.
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    pub reps: Vec<Elem>,
    pub sizes: Vec<usize>,
    pub class_of: Vec<u32>,
    /// Class of the inverses of the members of each class.
    pub inverse_class: Vec<u32>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Conjugacy classes of cyclic subgroups: one representative generator each.
#[derive(Clone, Debug)]
pub struct CyclicClasses {
    pub reps: Vec<Elem>,
    pub orders: Vec<u64>,
}

impl CyclicClasses {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

/// A quotient `G/N` with its own presentation and the projection map.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: PcGroup,
    /// `projection[g]` is the image of `g` in the quotient.
    pub projection: Vec<Elem>,
    /// Preimages of the quotient's pc-generators.
    pub lifts: Vec<Elem>,
}

/// A consistent pc-presented group with multiplication tables.
#[derive(Debug)]
pub struct PcGroup {
    id: u64,
    pres: PcPresentation,
    p: u32,
    n: usize,
    order: usize,
    pw: Vec<u32>,
    /// `step[k][x] = x * g_k` and `back[k][x] = x * g_k^-1`.
    step: Vec<Vec<Elem>>,
    back: Vec<Vec<Elem>>,
    /// `pow_tab[k * (p - 1) + e - 1][x] = x * g_k^e`.
    pow_tab: Vec<Vec<Elem>>,
    inv: Vec<Elem>,
    classes: OnceLock<ConjugacyClasses>,
}

impl Clone for PcGroup {
    fn clone(&self) -> Self {
        PcGroup {
            id: self.id,
            pres: self.pres.clone(),
            p: self.p,
            n: self.n,
            order: self.order,
            pw: self.pw.clone(),
            step: self.step.clone(),
            back: self.back.clone(),
            pow_tab: self.pow_tab.clone(),
            inv: self.inv.clone(),
            classes: self.classes.clone(),
        }
    }
}

impl PcGroup {
    /// Builds the multiplication tables by collection and proves consistency.
    pub fn new(pres: PcPresentation) -> Result<Self> {
        let p = pres.p;
        let n = pres.ngens;
        let order = pres.order();
        let pw: Vec<u32> = (0..=n).map(|k| p.pow(k as u32)).collect();
        let mut step: Vec<Vec<Elem>> = vec![Vec::new(); n];
        for j in (0..n).rev() {
            let mut table = vec![0; order];
            for (x, slot) in table.iter_mut().enumerate() {
                *slot = Self::collect_step(&pres, &pw, &step, x as Elem, j);
            }
            step[j] = table;
        }
        let mut back = Vec::with_capacity(n);
        for (k, t) in step.iter().enumerate() {
            let mut inv = vec![u32::MAX; order];
            for (x, &y) in t.iter().enumerate() {
                if inv[y as usize] != u32::MAX {
                    return Err(Error::Presentation(format!("right multiplication by g{} is not a bijection", k + 1)));
                }
                inv[y as usize] = x as Elem;
            }
            back.push(inv);
        }
        let mut g = PcGroup {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            pres,
            p,
            n,
            order,
            pw,
            step,
            back,
            pow_tab: Vec::new(),
            inv: Vec::new(),
            classes: OnceLock::new(),
        };
        g.check_consistency()?;
        let mut pow_tab = Vec::with_capacity(n * (p as usize - 1));
        for k in 0..n {
            let mut cur: Vec<Elem> = (0..order as Elem).collect();
            for _ in 1..p {
                cur = cur.iter().map(|&x| g.step[k][x as usize]).collect();
                pow_tab.push(cur.clone());
            }
        }
        g.pow_tab = pow_tab;
        g.inv = (0..order as Elem)
            .map(|x| {
                let e = g.exponents(x);
                let mut y = 0;
                for k in (0..n).rev() {
                    for _ in 0..e[k] {
                        y = g.back[k][y as usize];
                    }
                }
                y
            })
            .collect();
        Ok(g)
    }

    /// `x * g_j` by moving `g_j` left past the tail of `x`:
    /// `tail * g_j = g_j * prod_k (g_k [g_k, g_j])^(e_k)`.
    fn collect_step(pres: &PcPresentation, pw: &[u32], step: &[Vec<Elem>], x: Elem, j: usize) -> Elem {
        let p = pres.p;
        let n = pres.ngens;
        let e: Vec<u32> = (0..n).map(|k| x / pw[k] % p).collect();
        let mut word: Vec<usize> = Vec::new();
        let mut head: Elem = (0..j).map(|k| e[k] * pw[k]).sum();
        if e[j] + 1 == p {
            push_vector(&mut word, pres.power(j));
        } else {
            head += (e[j] + 1) * pw[j];
        }
        for k in j + 1..n {
            for _ in 0..e[k] {
                word.push(k);
                push_vector(&mut word, pres.commutator(k, j));
            }
        }
        word.iter().fold(head, |y, &k| step[k][y as usize])
    }

    /// Checks the tables against every relation on all points and that the
    /// action of normal-form words on the identity is regular.
    fn check_consistency(&self) -> Result<()> {
        let fail = |what: String| Err(Error::Presentation(format!("inconsistent presentation: {what}")));
        let apply = |x: Elem, word: &[usize]| word.iter().fold(x, |y, &k| self.step[k][y as usize]);
        for i in 0..self.n {
            let mut w = Vec::new();
            push_vector(&mut w, self.pres.power(i));
            let lhs = vec![i; self.p as usize];
            for x in 0..self.order as Elem {
                if apply(x, &lhs) != apply(x, &w) {
                    return fail(format!("g{}^p relation fails", i + 1));
                }
            }
        }
        for j in 0..self.n {
            for i in 0..j {
                let mut rhs = vec![i, j];
                push_vector(&mut rhs, self.pres.commutator(j, i));
                for x in 0..self.order as Elem {
                    if apply(x, &[j, i]) != apply(x, &rhs) {
                        return fail(format!("[g{}, g{}] relation fails", j + 1, i + 1));
                    }
                }
            }
        }
        for x in 0..self.order as Elem {
            let e = self.exponents(x);
            let mut y = 0;
            for (k, &ek) in e.iter().enumerate() {
                for _ in 0..ek {
                    y = self.step[k][y as usize];
                }
            }
            if y != x {
                return fail(format!("normal form of element {x} does not collect to itself"));
            }
        }
        Ok(())
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ngens(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    /// The pc-generator `g_k` (0-based).
    pub fn gen(&self, k: usize) -> Elem {
        self.pw[k]
    }

    pub fn gens(&self) -> Vec<Elem> {
        (0..self.n).map(|k| self.gen(k)).collect()
    }

    pub fn exponents(&self, x: Elem) -> Vec<u32> {
        (0..self.n).map(|k| x / self.pw[k] % self.p).collect()
    }

    pub fn from_exponents(&self, e: &[u32]) -> Result<Elem> {
        if e.len() != self.n || e.iter().any(|&v| v >= self.p) {
            return Err(Error::Usage(format!("invalid exponent vector {e:?}")));
        }
        Ok(e.iter().enumerate().map(|(k, &v)| v * self.pw[k]).sum())
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let mut x = a;
        let mut rest = b;
        let pm1 = self.p as usize - 1;
        for k in 0..self.n {
            let e = (rest % self.p) as usize;
            rest /= self.p;
            if e > 0 {
                x = self.pow_tab[k * pm1 + e - 1][x as usize];
            }
        }
        x
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let mut base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn comm(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// `a^g = g^-1 a g`.
    pub fn conj(&self, a: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// Normal form of a word of generator-power letters `(k, e)` meaning `g_k^e`.
    pub fn collect(&self, word: &[(usize, i64)]) -> Result<Elem> {
        let mut x = 0;
        for &(k, e) in word {
            if k >= self.n {
                return Err(Error::Usage(format!("word references generator {} of {}", k + 1, self.n)));
            }
            let table = if e < 0 { &self.back[k] } else { &self.step[k] };
            for _ in 0..e.unsigned_abs() {
                x = table[x as usize];
            }
        }
        Ok(x)
    }

    pub fn element_order(&self, x: Elem) -> u64 {
        let mut y = x;
        let mut o = 1;
        while y != 0 {
            y = self.pow(y, self.p as i64);
            o *= self.p as u64;
        }
        o
    }

    pub fn element(&self, x: Elem) -> Result<GroupElement> {
        if (x as usize) < self.order {
            Ok(GroupElement { group: self.id, index: x })
        } else {
            Err(Error::Usage(format!("element index {x} out of range")))
        }
    }

    fn own(&self, a: GroupElement) -> Result<Elem> {
        if a.group == self.id {
            Ok(a.index)
        } else {
            Err(Error::Usage("element belongs to a different presentation".into()))
        }
    }

    pub fn multiply(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement> {
        self.element(self.mul(self.own(a)?, self.own(b)?))
    }

    pub fn inverse(&self, a: GroupElement) -> Result<GroupElement> {
        self.element(self.inv(self.own(a)?))
    }

    pub fn power(&self, a: GroupElement, k: i64) -> Result<GroupElement> {
        self.element(self.pow(self.own(a)?, k))
    }

    pub fn commutator(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement> {
        self.element(self.comm(self.own(a)?, self.own(b)?))
    }

    // ---- subgroups ----

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_members(self.gens(), (0..self.order as Elem).collect(), self.order)
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_members(Vec::new(), vec![0], self.order)
    }

    /// Smallest subgroup containing `gens`.
    pub fn closure(&self, gens: &[Elem]) -> Subgroup {
        let gens: Vec<Elem> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut mask = vec![false; self.order];
        let mut members = vec![0];
        mask[0] = true;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in &gens {
                let y = self.mul(x, g);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        Subgroup { gens, members, mask }
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[Elem]) -> Subgroup {
        let mut cur = self.closure(gens);
        loop {
            let mut extra: Vec<Elem> = Vec::new();
            for &s in cur.gens() {
                for g in self.gens() {
                    let c = self.conj(s, g);
                    if !cur.contains(c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return cur;
            }
            let mut all = cur.gens.clone();
            all.extend(extra);
            cur = self.closure(&all);
        }
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        s.gens().iter().all(|&x| self.gens().into_iter().all(|g| s.contains(self.conj(x, g))))
    }

    pub fn is_abelian(&self, s: &Subgroup) -> bool {
        let g = s.gens();
        g.iter().enumerate().all(|(i, &a)| g[i + 1..].iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(&self.whole())
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.gens();
        let mut comms = Vec::new();
        for (i, &a) in g.iter().enumerate() {
            for &b in &g[..i] {
                comms.push(self.comm(a, b));
            }
        }
        self.normal_closure(&comms)
    }

    /// `{g : gs = sg for all s in S}`.
    pub fn centralizer(&self, s: &Subgroup) -> Subgroup {
        let members: Vec<Elem> = (0..self.order as Elem)
            .filter(|&g| s.gens().iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect();
        self.subgroup_from_members(members)
    }

    /// `{g : [g, x] in K for all x in S}`; the preimage of the centralizer of `S/K`.
    pub fn centralizer_mod(&self, s: &Subgroup, k: &Subgroup) -> Subgroup {
        let members: Vec<Elem> = (0..self.order as Elem)
            .filter(|&g| s.gens().iter().all(|&x| k.contains(self.comm(g, x))))
            .collect();
        self.subgroup_from_members(members)
    }

    /// Wraps a member list already known to be a subgroup, choosing generators.
    pub fn subgroup_from_members(&self, members: Vec<Elem>) -> Subgroup {
        let mut gens = Vec::new();
        let mut cur = self.trivial();
        for &m in &members {
            if !cur.contains(m) {
                gens.push(m);
                cur = self.closure(&gens);
            }
        }
        debug_assert_eq!(cur.order(), members.len());
        Subgroup::from_members(gens, members, self.order)
    }

    pub fn exponent(&self, s: &Subgroup) -> u64 {
        s.members().iter().map(|&x| self.element_order(x)).max().unwrap_or(1)
    }

    /// Order of `xB` in `A/B` for `x` normalizing `B`.
    pub fn order_mod(&self, x: Elem, b: &Subgroup) -> u64 {
        let mut y = x;
        let mut o = 1;
        while !b.contains(y) {
            y = self.pow(y, self.p as i64);
            o *= self.p as u64;
        }
        o
    }

    pub fn exponent_mod(&self, a: &Subgroup, b: &Subgroup) -> u64 {
        a.members().iter().map(|&x| self.order_mod(x, b)).max().unwrap_or(1)
    }

    /// Number of cyclic subgroups of `A/B` of each order (`B` normal in `A`).
    pub fn cyclic_counts_mod(&self, a: &Subgroup, b: &Subgroup) -> BTreeMap<u64, u64> {
        let mut by_order: BTreeMap<u64, u64> = BTreeMap::new();
        for &x in a.members() {
            *by_order.entry(self.order_mod(x, b)).or_default() += 1;
        }
        by_order
            .into_iter()
            .map(|(d, c)| (d, c / (b.order() as u64 * phi_prime_power(d))))
            .collect()
    }

    /// Invariants of the abelian quotient `A/B`, sorted descending.
    pub fn abelian_invariants_mod(&self, a: &Subgroup, b: &Subgroup) -> Result<Vec<u64>> {
        let ga = a.gens();
        for (i, &x) in ga.iter().enumerate() {
            for &y in &ga[..i] {
                if !b.contains(self.comm(x, y)) {
                    return Err(Error::Usage("quotient is not abelian".into()));
                }
            }
        }
        let p = self.p as u64;
        let bo = b.order() as u64;
        let size = (a.order() as u64) / bo;
        let mut omega = vec![1u64];
        while *omega.last().unwrap() < size {
            let j = omega.len() as u32;
            let q = p.pow(j);
            let cnt = a.members().iter().filter(|&&x| self.order_mod(x, b) <= q).count() as u64 / bo;
            omega.push(cnt);
        }
        let mut ranks = Vec::new();
        for j in 1..omega.len() {
            ranks.push(log_p(omega[j] / omega[j - 1], p).expect("p-power ratio"));
        }
        let mut inv = Vec::new();
        for j in (0..ranks.len()).rev() {
            let exact = ranks[j] - ranks.get(j + 1).copied().unwrap_or(0);
            for _ in 0..exact {
                inv.push(p.pow(j as u32 + 1));
            }
        }
        Ok(inv)
    }

    pub fn abelian_invariants(&self, s: &Subgroup) -> Result<Vec<u64>> {
        if !self.is_abelian(s) {
            return Err(Error::Usage("subgroup is not abelian".into()));
        }
        self.abelian_invariants_mod(s, &self.trivial())
    }

    /// `Phi(G) = G' G^p`.
    pub fn frattini(&self) -> Subgroup {
        let mut gens = self.derived_subgroup().gens().to_vec();
        gens.extend(self.gens().iter().map(|&g| self.pow(g, self.p as i64)));
        self.closure(&gens)
    }

    /// All subgroups of index `p`, as hyperplanes of `G/Phi(G)`.
    pub fn maximal_subgroups(&self) -> Vec<Subgroup> {
        let phi = self.frattini();
        let mut basis: Vec<Elem> = Vec::new();
        let mut span = phi.clone();
        for g in self.gens() {
            if !span.contains(g) {
                basis.push(g);
                let mut gs = phi.gens().to_vec();
                gs.extend(&basis);
                span = self.closure(&gs);
            }
        }
        let r = basis.len();
        let p = self.p;
        let mut out = Vec::new();
        for lead in 0..r {
            let free: Vec<usize> = (lead + 1..r).collect();
            let total = (p as usize).pow(free.len() as u32);
            for code in 0..total {
                let mut f = vec![0u32; r];
                f[lead] = 1;
                let mut c = code;
                for &i in &free {
                    f[i] = (c % p as usize) as u32;
                    c /= p as usize;
                }
                let mut gens = phi.gens().to_vec();
                for i in 0..r {
                    if i != lead {
                        gens.push(self.mul(basis[i], self.pow(basis[lead], -(f[i] as i64))));
                    }
                }
                out.push(self.closure(&gens));
            }
        }
        out.sort_by(|a, b| a.members.cmp(&b.members));
        out
    }

    /// All subgroups of the given order containing `n`.
    pub fn overgroups_of(&self, n: &Subgroup, order: usize) -> Vec<Subgroup> {
        self.overgroups_filtered(n, order, |_, _| true)
    }

    /// Layered extension of `n` to subgroups of order `order`, extending only by
    /// elements `x` accepted by `allow(S, x)`.
    pub fn overgroups_filtered<F>(&self, n: &Subgroup, order: usize, allow: F) -> Vec<Subgroup>
    where
        F: Fn(&Subgroup, Elem) -> bool,
    {
        if order < n.order() || order % n.order() != 0 {
            return Vec::new();
        }
        let mut layer = vec![n.clone()];
        while layer[0].order() < order {
            let mut seen: HashSet<Vec<Elem>> = HashSet::new();
            let mut next = Vec::new();
            for s in &layer {
                let mut done = s.mask.clone();
                for x in 0..self.order as Elem {
                    if done[x as usize] || !s.contains(self.pow(x, self.p as i64)) {
                        continue;
                    }
                    if !s.gens().iter().all(|&y| s.contains(self.conj(y, x))) || !allow(s, x) {
                        continue;
                    }
                    let mut members = Vec::with_capacity(s.order() * self.p as usize);
                    let mut xi = 0;
                    for _ in 0..self.p {
                        members.extend(s.members().iter().map(|&m| self.mul(xi, m)));
                        xi = self.mul(xi, x);
                    }
                    for &m in &members {
                        done[m as usize] = true;
                    }
                    members.sort_unstable();
                    if seen.insert(members.clone()) {
                        let mut gens = s.gens().to_vec();
                        gens.push(x);
                        next.push(Subgroup::from_members(gens, members, self.order));
                    }
                }
            }
            if next.is_empty() {
                return Vec::new();
            }
            layer = next;
        }
        layer.sort_by(|a, b| a.members.cmp(&b.members));
        layer
    }

    /// Left coset representatives of `h` (least index per coset), ascending.
    pub fn left_transversal(&self, h: &Subgroup) -> Vec<Elem> {
        let mut seen = vec![false; self.order];
        let mut reps = Vec::with_capacity(self.order / h.order());
        for x in 0..self.order as Elem {
            if seen[x as usize] {
                continue;
            }
            reps.push(x);
            for &m in h.members() {
                seen[self.mul(x, m) as usize] = true;
            }
        }
        reps
    }

    // ---- classes ----

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| self.compute_classes())
    }

    fn compute_classes(&self) -> ConjugacyClasses {
        let gens = self.gens();
        let gens_inv: Vec<Elem> = gens.iter().map(|&g| self.inv(g)).collect();
        let mut class_of = vec![u32::MAX; self.order];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for x in 0..self.order as Elem {
            if class_of[x as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            class_of[x as usize] = c;
            queue.push_back(x);
            let mut size = 0;
            while let Some(y) = queue.pop_front() {
                size += 1;
                for (k, &g) in gens.iter().enumerate() {
                    let z = self.mul(self.mul(gens_inv[k], y), g);
                    if class_of[z as usize] == u32::MAX {
                        class_of[z as usize] = c;
                        queue.push_back(z);
                    }
                }
            }
            sizes.push(size);
        }
        let inverse_class = reps.iter().map(|&r| class_of[self.inv(r) as usize]).collect();
        ConjugacyClasses { reps, sizes, class_of, inverse_class }
    }

    /// Canonical generator (least index) of `<x>`.
    pub fn cyclic_id(&self, x: Elem) -> Elem {
        let o = self.element_order(x);
        let mut best = x;
        let mut y = x;
        for j in 1..o {
            if j % self.p as u64 != 0 {
                best = best.min(y);
            }
            y = self.mul(y, x);
        }
        best
    }

    /// Conjugacy classes of cyclic subgroups.
    pub fn cyclic_subgroup_classes(&self) -> CyclicClasses {
        let mut cid = vec![u32::MAX; self.order];
        let mut ids = Vec::new();
        for x in 0..self.order as Elem {
            if cid[x as usize] != u32::MAX {
                continue;
            }
            let o = self.element_order(x);
            let mut y = x;
            for j in 1..=o {
                if j % self.p as u64 != 0 || o == 1 {
                    cid[y as usize] = x;
                }
                y = self.mul(y, x);
            }
            ids.push(x);
        }
        let mut parent: Vec<Elem> = (0..self.order as Elem).collect();
        fn find(parent: &mut [Elem], mut a: Elem) -> Elem {
            while parent[a as usize] != a {
                parent[a as usize] = parent[parent[a as usize] as usize];
                a = parent[a as usize];
            }
            a
        }
        for &c in &ids {
            for g in self.gens() {
                let d = cid[self.conj(c, g) as usize];
                let (ra, rb) = (find(&mut parent, c), find(&mut parent, d));
                if ra != rb {
                    let (lo, hi) = (ra.min(rb), ra.max(rb));
                    parent[hi as usize] = lo;
                }
            }
        }
        let mut reps: Vec<Elem> = ids.iter().copied().filter(|&c| find(&mut parent, c) == c).collect();
        reps.sort_unstable();
        let orders = reps.iter().map(|&r| self.element_order(r)).collect();
        CyclicClasses { reps, orders }
    }

    /// Number of irreducible characters of each degree, from the class count and
    /// `|G/G'|` using `a + b p^2 + c p^4 = p^5`.
    pub fn char_degree_counts(&self) -> Result<BTreeMap<u64, u64>> {
        let p = self.p as u64;
        if self.order as u64 != p.pow(5) {
            return Err(Error::Usage(format!("degree counts need order p^5, got {}", self.order)));
        }
        let k = self.conjugacy_classes().len() as i64;
        let a = (self.order / self.derived_subgroup().order()) as i64;
        let (p2, p4, p5) = ((p * p) as i64, p.pow(4) as i64, p.pow(5) as i64);
        let num = (k - a) * p4 - p5 + a;
        let den = p4 - p2;
        if num % den != 0 {
            return Err(Error::Inconsistent(format!("no integral degree solution for k={k}, a={a}")));
        }
        let b = num / den;
        let c = k - a - b;
        if b < 0 || c < 0 {
            return Err(Error::Inconsistent(format!("negative degree count for k={k}, a={a}")));
        }
        let mut out = BTreeMap::new();
        for (deg, cnt) in [(1, a), (p, b), (p * p, c)] {
            if cnt > 0 {
                out.insert(deg, cnt as u64);
            }
        }
        Ok(out)
    }

    // ---- quotients ----

    /// Presentation of `G/N` on a central series through `N`, with the projection.
    pub fn quotient_data(&self, n: &Subgroup) -> Result<Quotient> {
        if !self.is_normal(n) {
            return Err(Error::Usage("quotient by a non-normal subgroup".into()));
        }
        let gens = self.gens();
        let mut series = vec![n.clone()];
        let mut picks = Vec::new();
        while series.last().unwrap().order() < self.order {
            let m = series.last().unwrap();
            let x = (0..self.order as Elem)
                .find(|&x| {
                    !m.contains(x)
                        && m.contains(self.pow(x, self.p as i64))
                        && gens.iter().all(|&g| m.contains(self.comm(x, g)))
                })
                .ok_or_else(|| Error::Inconsistent("quotient has trivial center".into()))?;
            let mut gs = m.gens().to_vec();
            gs.push(x);
            series.push(self.closure(&gs));
            picks.push(x);
        }
        let m = picks.len();
        let ys: Vec<Elem> = picks.iter().rev().copied().collect();
        let levels: Vec<&Subgroup> = (0..=m).map(|i| &series[m - i]).collect();
        let sift = |mut g: Elem| -> Vec<u32> {
            let mut e = vec![0u32; m];
            for i in 0..m {
                let yi = self.inv(ys[i]);
                let mut k = 0;
                while !levels[i + 1].contains(g) {
                    g = self.mul(yi, g);
                    k += 1;
                }
                e[i] = k;
            }
            e
        };
        let mut pres = PcPresentation::new(self.p, m)?;
        for i in 0..m {
            pres.set_power(i, &sift(self.pow(ys[i], self.p as i64)))?;
            for j in i + 1..m {
                pres.set_commutator(j, i, &sift(self.comm(ys[j], ys[i])))?;
            }
        }
        let group = PcGroup::new(pres)?;
        let projection = (0..self.order as Elem)
            .map(|g| group.from_exponents(&sift(g)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Quotient { group, projection, lifts: ys })
    }
}

fn push_vector(word: &mut Vec<usize>, w: &[u32]) {
    for (k, &e) in w.iter().enumerate() {
        for _ in 0..e {
            word.push(k);
        }
    }
}
