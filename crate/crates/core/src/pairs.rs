//! Strong pairs `(H, psi)`: a subgroup and a linear character with `psi^G`
//! irreducible and `Q(psi) = Q(psi^G)`, one per Galois class of irreducible
//! characters. Closed forms per family, and an exhaustive search used as oracle.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Rational64;
use rayon::prelude::*;

use crate::arith::{inv_mod, phi_prime_power, pow_mod, primitive_root, prime_power};
use crate::catalog::GroupInstance;
use crate::character::{
    abelianization_characters, character_inner_product, decode, induce, omega_values, AbelianBasis,
    ClassFunction, LinearCharacter,
};
use crate::error::{Error, Result};
use crate::pc::{Elem, PcGroup, Subgroup};

/// A required pair together with the invariants of the character it induces.
#[derive(Clone, Debug)]
pub struct RequiredPair {
    pub subgroup: Subgroup,
    pub psi: LinearCharacter,
    /// `chi(1) = [G:H]`.
    pub degree: u64,
    /// `Q(chi) = Q(zeta_d)`.
    pub d: u64,
    /// `Omega(chi)` at the conjugacy class representatives; identifies the Galois orbit.
    pub key: Vec<i64>,
}

impl RequiredPair {
    /// Dimension `chi(1) * [Q(chi):Q]` of the rational representation.
    pub fn rational_degree(&self) -> u64 {
        self.degree * phi_prime_power(self.d)
    }
}

/// Which route produced a pair list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    ClosedForm,
    Search,
}

/// Pairs for all Galois classes of `Irr(G)`, with the route that produced them.
#[derive(Clone, Debug)]
pub struct PairSet {
    pub pairs: Vec<RequiredPair>,
    pub route: Route,
    /// Reason the search replaced a closed form, if it did.
    pub note: Option<String>,
}

/// Induction data for one subgroup `H`: transversal, double cosets, and conjugates
/// of the class representatives.
pub struct Inducer<'a> {
    g: &'a PcGroup,
    h: Subgroup,
    n: u64,
    transversal: Vec<Elem>,
    /// For each nontrivial double coset `HtH`, pairs `(x, t^-1 x t)` over generators
    /// `x` of `H ∩ tHt^-1`.
    mackey: Vec<Vec<(Elem, Elem)>>,
    /// `conj[c * k + i] = t_i^-1 c t_i` for class representative `c`.
    conj: Vec<Elem>,
}

impl<'a> Inducer<'a> {
    pub fn new(g: &'a PcGroup, h: &Subgroup) -> Self {
        let n = g.exponent(&g.whole());
        let transversal = g.left_transversal(h);
        let k = transversal.len();
        let mut coset_of = vec![u32::MAX; g.order()];
        for (i, &t) in transversal.iter().enumerate() {
            for &m in h.members() {
                coset_of[g.mul(t, m) as usize] = i as u32;
            }
        }
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut mackey = Vec::new();
        for (i, &t) in transversal.iter().enumerate().skip(1) {
            if seen[i] {
                continue;
            }
            for &m in h.members() {
                seen[coset_of[g.mul(m, t) as usize] as usize] = true;
            }
            let ti = g.inv(t);
            let inter: Vec<Elem> = h
                .members()
                .iter()
                .copied()
                .filter(|&x| h.contains(g.mul(g.mul(ti, x), t)))
                .collect();
            let mut gens: Vec<Elem> = Vec::new();
            let mut span = g.trivial();
            for &x in &inter {
                if !span.contains(x) {
                    gens.push(x);
                    span = g.closure(&gens);
                }
            }
            mackey.push(gens.iter().map(|&x| (x, g.mul(g.mul(ti, x), t))).collect());
        }
        let reps = &g.conjugacy_classes().reps;
        let mut conj = Vec::with_capacity(reps.len() * k);
        for &c in reps {
            for &t in &transversal {
                conj.push(g.conj(c, t));
            }
        }
        Inducer { g, h: h.clone(), n, transversal, mackey, conj }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.h
    }

    pub fn index(&self) -> u64 {
        self.transversal.len() as u64
    }

    pub fn transversal(&self) -> &[Elem] {
        &self.transversal
    }

    /// Mackey: `psi^G` is irreducible iff `psi^t != psi` on `H ∩ tHt^-1` for every `t ∉ H`.
    pub fn is_irreducible(&self, v: &dyn Fn(Elem) -> u64) -> bool {
        self.mackey.iter().all(|pairs| pairs.iter().any(|&(x, y)| v(x) != v(y)))
    }

    /// No nontrivial `sigma` in `Gal(Q(zeta_d)/Q)` fixes `psi^G`: for each element `s` of
    /// prime order, `psi^s` is not `G`-conjugate to `psi`.
    pub fn has_full_field(&self, v: &dyn Fn(Elem) -> u64, d: u64) -> bool {
        let n = self.n;
        minimal_units(d).into_iter().all(|s| {
            self.mackey
                .iter()
                .all(|pairs| !pairs.iter().all(|&(x, y)| (s as u128 * v(x) as u128 % n as u128) as u64 == v(y)))
        })
    }

    /// `Omega(psi^G)` at the class representatives.
    pub fn omega_key(&self, v: &dyn Fn(Elem) -> Option<u64>, d: u64) -> Vec<i64> {
        let k = self.transversal.len();
        let n = self.n;
        let phi = phi_prime_power(d) as i64;
        let p = self.g.p() as i64;
        self.conj
            .chunks(k)
            .map(|row| {
                row.iter()
                    .filter_map(|&x| v(x))
                    .map(|e| match n / e.gcd(&n) {
                        1 => phi,
                        o if o as i64 == p => -phi / (p - 1),
                        _ => 0,
                    })
                    .sum()
            })
            .collect()
    }

    /// Builds the pair if `psi` passes the irreducibility and field tests.
    pub fn try_pair(&self, psi: &LinearCharacter) -> Option<RequiredPair> {
        let v = |x: Elem| psi.exponent_at(x).expect("psi defined on H");
        let d = psi.order();
        if !self.is_irreducible(&v) || !self.has_full_field(&v, d) {
            return None;
        }
        let key = self.omega_key(&|x| psi.exponent_at(x), d);
        Some(RequiredPair { subgroup: self.h.clone(), psi: psi.clone(), degree: self.index(), d, key })
    }
}

/// One element of each subgroup of prime order in `(Z/d)^*`.
fn minimal_units(d: u64) -> Vec<u64> {
    if d <= 2 {
        return Vec::new();
    }
    let (p, k) = prime_power(d).expect("prime power");
    let mut out = Vec::new();
    if k >= 2 {
        out.push(1 + d / p);
    }
    let g = primitive_root(d);
    let phi = phi_prime_power(d);
    let mut m = p - 1;
    let mut q = 2;
    while m > 1 {
        if m % q == 0 {
            out.push(pow_mod(g, phi / q, d));
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    out
}

/// `a` is lexicographically least among its Galois conjugates `s a`.
fn is_galois_least(a: &[u64], orders: &[u64]) -> bool {
    let e = orders.iter().copied().max().unwrap_or(1);
    if e == 1 {
        return true;
    }
    let p = prime_power(e).unwrap().0;
    (2..e).filter(|s| s % p != 0).all(|s| {
        let b = a.iter().zip(orders).map(|(&x, &o)| x * s % o);
        b.cmp(a.iter().copied()) != std::cmp::Ordering::Less
    })
}

/// All pairs `(H, psi)` for `psi` in `lin(H)` trivial on `k`, one per Galois orbit of `psi^G`.
fn search_subgroup(g: &PcGroup, h: &Subgroup, k: Option<&Subgroup>) -> Result<Vec<RequiredPair>> {
    if let Some(k) = k {
        if !k.is_subgroup_of(h) {
            return Ok(Vec::new());
        }
    }
    let n = g.exponent(&g.whole());
    let basis = AbelianBasis::new(g, h);
    let ind = Inducer::new(g, h);
    let scale: Vec<u64> = basis.orders.iter().map(|&o| n / o).collect();
    let mut found: BTreeMap<Vec<i64>, RequiredPair> = BTreeMap::new();
    for code in 0..basis.quotient_order() {
        let a = decode(code, &basis.orders);
        if !is_galois_least(&a, &basis.orders) {
            continue;
        }
        let images: Vec<u64> = a.iter().zip(&scale).map(|(&x, &s)| x * s).collect();
        let d = n / images.iter().fold(n, |acc, &x| acc.gcd(&x));
        let v = |x: Elem| -> u64 {
            let c = basis.coords(x).expect("member of H");
            c.iter().zip(&images).map(|(&ci, &im)| ci as u64 * im).sum::<u64>() % n
        };
        if let Some(k) = k {
            if k.gens().iter().any(|&x| v(x) != 0) {
                continue;
            }
        }
        if !ind.is_irreducible(&v) || !ind.has_full_field(&v, d) {
            continue;
        }
        let key = ind.omega_key(&|x| basis.coords(x).map(|_| v(x)), d);
        if found.contains_key(&key) {
            continue;
        }
        let psi = LinearCharacter::from_basis(g, h, &basis, n, &a)?;
        found.insert(key.clone(), RequiredPair { subgroup: h.clone(), psi, degree: ind.index(), d, key });
    }
    Ok(found.into_values().collect())
}

/// Merges per-candidate results keeping the first pair for each orbit, then sorts.
fn merge(lists: Vec<Vec<RequiredPair>>) -> Vec<RequiredPair> {
    let mut out: BTreeMap<Vec<i64>, RequiredPair> = BTreeMap::new();
    for list in lists {
        for pair in list {
            out.entry(pair.key.clone()).or_insert(pair);
        }
    }
    sort_pairs(out.into_values().collect())
}

fn sort_pairs(mut pairs: Vec<RequiredPair>) -> Vec<RequiredPair> {
    pairs.sort_by(|a, b| (a.degree, a.d, &a.key).cmp(&(b.degree, b.d, &b.key)));
    pairs
}

fn search_candidates(g: &PcGroup, candidates: &[Subgroup], k: Option<&Subgroup>) -> Result<Vec<RequiredPair>> {
    g.conjugacy_classes();
    let lists = candidates.par_iter().map(|h| search_subgroup(g, h, k)).collect::<Result<Vec<_>>>()?;
    Ok(merge(lists))
}

fn check_count(pairs: &[RequiredPair], expected: usize, what: &str) -> Result<()> {
    if pairs.len() != expected {
        return Err(Error::Incomplete(format!(
            "{what}: {} Galois classes found but there are {expected} classes of cyclic subgroups",
            pairs.len()
        )));
    }
    Ok(())
}

/// `(G, psi)` for one `psi` in each Galois class of `lin(G)`.
pub fn linear_pairs(g: &PcGroup) -> Result<Vec<RequiredPair>> {
    Ok(sort_pairs(search_subgroup(g, &g.whole(), None)?))
}

/// Candidate subgroups: all maximal subgroups and, when `G` has characters of
/// degree `p^2`, all abelian subgroups of order `p^3` containing `Z(G)`.
pub fn search_candidates_for(g: &PcGroup) -> Result<Vec<Subgroup>> {
    let mut cands = g.maximal_subgroups();
    let p = g.p() as usize;
    let big = g.order() == p.pow(5) && g.char_degree_counts()?.contains_key(&((p * p) as u64));
    if big {
        let z = g.center();
        if g.is_abelian(&z) {
            let abel = g.overgroups_filtered(&z, p * p * p, |s, x| s.gens().iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
            cands.extend(abel);
        }
    }
    Ok(cands)
}

/// Exhaustive search over the candidate subgroups, with the completeness check
/// against the number of conjugacy classes of cyclic subgroups.
pub fn generic_search(g: &PcGroup) -> Result<Vec<RequiredPair>> {
    let mut lists = vec![linear_pairs(g)?];
    if !g.is_abelian(&g.whole()) {
        lists.push(search_candidates(g, &search_candidates_for(g)?, None)?);
    }
    let pairs = merge(lists);
    check_count(&pairs, g.cyclic_subgroup_classes().count(), "search")?;
    Ok(pairs)
}

/// Pairs for every `chi` with `K` in its kernel (`K` normal), found in `G` with
/// `K <= H` and `psi|K = 1`; complete against the cyclic subgroup classes of `G/K`.
pub fn quotient_lift_pairs(g: &PcGroup, k: &Subgroup) -> Result<Vec<RequiredPair>> {
    if !g.is_normal(k) {
        return Err(Error::Usage("lifting needs a normal subgroup".into()));
    }
    if k.order() == 1 {
        return generic_search(g);
    }
    let mut cands: Vec<Subgroup> = vec![g.whole()];
    cands.extend(g.maximal_subgroups().into_iter().filter(|m| k.is_subgroup_of(m)));
    let q = g.quotient_data(k)?;
    let pq = q.group.p() as usize;
    if q.group.order() >= pq.pow(5) {
        return Err(Error::Usage("lifting needs a quotient of order at most p^4".into()));
    }
    let pairs = search_candidates(g, &cands, Some(k))?;
    check_count(&pairs, q.group.cyclic_subgroup_classes().count(), "lift")?;
    Ok(pairs)
}

/// How a generator of `H` is mapped by the closed-form `psi`.
#[derive(Clone, Copy, Debug)]
enum Image {
    /// `psi(x) = mu(x)` for `x` in `Z(G)`.
    Mu,
    One,
    /// `psi(x) = zeta` with `zeta^p = mu(z)`, taking `mu(z) = zeta_n^v` to `zeta_n^(v/p)`.
    MuRoot(Elem),
}

/// Galois orbit representatives of the characters of `Z` accepted by `keep`, each
/// chosen lexicographically least among conjugates satisfying `normal`.
fn mu_representatives(
    g: &PcGroup,
    z: &Subgroup,
    keep: &dyn Fn(&LinearCharacter) -> bool,
    normal: &dyn Fn(&LinearCharacter) -> bool,
) -> Result<Vec<LinearCharacter>> {
    let all = abelianization_characters(g, z)?;
    let p = g.p() as u64;
    let mut reps: Vec<LinearCharacter> = Vec::new();
    let mut seen: Vec<Vec<u64>> = Vec::new();
    for mu in all.iter().filter(|m| keep(m)) {
        let d = mu.order();
        let conj: Vec<LinearCharacter> =
            (1..d.max(2)).filter(|s| s % p != 0).map(|s| mu.galois_conjugate(s)).collect();
        let sig = |m: &LinearCharacter| -> Vec<u64> { z.members().iter().map(|&x| m.exponent_at(x).unwrap()).collect() };
        let orbit_id = conj.iter().map(sig).min().unwrap();
        if seen.contains(&orbit_id) {
            continue;
        }
        seen.push(orbit_id);
        let best = conj
            .iter()
            .filter(|m| normal(m))
            .min_by_key(|m| m.image_exponents().to_vec())
            .ok_or_else(|| Error::Inconsistent("no normalized Galois conjugate".into()))?;
        reps.push(best.clone());
    }
    Ok(reps)
}

fn psi_from_rules(g: &PcGroup, mu: &LinearCharacter, gens: &[Elem], rules: &[Image]) -> Result<LinearCharacter> {
    let n = mu.modulus();
    let p = g.p() as u64;
    let images = gens
        .iter()
        .zip(rules)
        .map(|(&x, r)| match *r {
            Image::Mu => mu.exponent_at(x).ok_or_else(|| Error::CatalogData("generator marked central is not in Z(G)".into())),
            Image::One => Ok(0),
            Image::MuRoot(z) => {
                let v = mu.exponent_at(z).ok_or_else(|| Error::CatalogData("root target is not in Z(G)".into()))?;
                if v % p != 0 {
                    return Err(Error::Inconsistent("p-th root leaves the exponent modulus".into()));
                }
                Ok(v / p)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    LinearCharacter::from_images(g, n, gens, &images)
}

/// `Mu` on central generators and `One` elsewhere.
fn default_rules(z: &Subgroup, gens: &[Elem]) -> Vec<Image> {
    gens.iter().map(|&x| if z.contains(x) { Image::Mu } else { Image::One }).collect()
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Checks a closed-form pair: `psi|Z = mu`, `|ker psi| = |G/Z|^(1/2) |ker mu|`, and validity.
fn closed_pair(g: &PcGroup, mu: &LinearCharacter, psi: LinearCharacter, what: &str) -> Result<RequiredPair> {
    let z = mu.subgroup();
    if z.members().iter().any(|&x| psi.exponent_at(x) != mu.exponent_at(x)) {
        return Err(Error::Verification(format!("{what}: psi does not restrict to mu on Z(G)")));
    }
    let root = isqrt((g.order() / z.order()) as u64);
    let ker_psi = psi.kernel(g).order() as u64;
    let ker_mu = mu.kernel(g).order() as u64;
    if ker_psi != root * ker_mu {
        return Err(Error::Verification(format!(
            "{what}: |ker psi| = {ker_psi} but |G/Z|^(1/2) |ker mu| = {}",
            root * ker_mu
        )));
    }
    Inducer::new(g, psi.subgroup())
        .try_pair(&psi)
        .ok_or_else(|| Error::Verification(format!("{what}: (H, psi) is not a required pair")))
}

/// The tabulated `(H, images)` for `mu` in a VZ group.
fn vz_subgroup(inst: &GroupInstance, mu: &LinearCharacter) -> Result<(Vec<Elem>, Vec<Image>)> {
    let g = &inst.group;
    let z = mu.subgroup();
    let n = mu.modulus();
    let p = g.p() as u64;
    let step = n / p;
    let e = |name: &str| inst.element(name);
    let mu_p = |x: Elem| -> Result<u64> {
        let v = mu.exponent_at(x).ok_or_else(|| Error::CatalogData("element is not central".into()))?;
        Ok(v)
    };
    let name = inst.name.as_str();
    match name {
        "Phi_2(221)a" => {
            let (a, a1, gamma) = (e("alpha")?, e("alpha1")?, e("gamma")?);
            let i = mu_p(g.pow(a1, p as i64))? / step;
            let x = g.mul(g.pow(a, -(i as i64)), a1);
            Ok((vec![x, g.pow(a, p as i64), gamma], vec![Image::One, Image::Mu, Image::Mu]))
        }
        "Phi_2(32)a_2" => {
            let (a, a1) = (e("alpha")?, e("alpha1")?);
            let ap = g.pow(a, p as i64);
            let a1p = g.pow(a1, p as i64);
            let v = mu_p(ap)?;
            if v % step != 0 {
                Ok((vec![ap, a1], vec![Image::Mu, Image::MuRoot(a1p)]))
            } else {
                let i = v / step;
                let x = g.mul(a, g.pow(a1, -(i as i64)));
                Ok((vec![x, a1p], vec![Image::One, Image::Mu]))
            }
        }
        "Phi_2(221)d" => {
            let (a, a1, a2) = (e("alpha")?, e("alpha1")?, e("alpha2")?);
            let ap = g.pow(a, p as i64);
            let a1p = g.pow(a1, p as i64);
            let j = mu_p(a1p)? / step;
            if j == 0 {
                Ok((vec![ap, a1, a2], vec![Image::Mu, Image::One, Image::Mu]))
            } else {
                let k = mu_p(ap)? / step;
                let i = k * inv_mod(j, p) % p;
                let x = g.mul(a, g.pow(a1, -(i as i64)));
                Ok((vec![x, a1p, a2], vec![Image::One, Image::Mu, Image::Mu]))
            }
        }
        "Phi_2(32)a_1" => {
            let h = inst.subgroup("H")?;
            let a1 = e("alpha1")?;
            let rules = h
                .gens()
                .iter()
                .map(|&x| if x == a1 { Image::MuRoot(g.pow(a1, p as i64)) } else if z.contains(x) { Image::Mu } else { Image::One })
                .collect();
            Ok((h.gens().to_vec(), rules))
        }
        _ => {
            let h = inst.subgroup("H").map_err(|_| Error::Unsupported(format!("no tabulated subgroup for {name}")))?;
            Ok((h.gens().to_vec(), default_rules(z, h.gens())))
        }
    }
}

/// Pairs for the nonlinear classes of a VZ group (families 2 and 5): one per Galois
/// class of `mu` in `Irr(Z(G) | G')`.
pub fn vz_pairs(inst: &GroupInstance) -> Result<Vec<RequiredPair>> {
    let f = inst.family.index();
    if f != 2 && f != 5 {
        return Err(Error::Dispatch(format!("{} is in {}, not a VZ family", inst.name, inst.family)));
    }
    let g = &inst.group;
    let z = g.center();
    let d = g.derived_subgroup();
    let dg = d.gens()[0];
    let n = g.exponent(&g.whole());
    let step = n / g.p() as u64;
    let mus = mu_representatives(g, &z, &|m| !m.is_trivial_on(&d), &|m| m.exponent_at(dg) == Some(step))?;
    let pairs = mus
        .iter()
        .map(|mu| {
            let (gens, rules) = vz_subgroup(inst, mu)?;
            let psi = psi_from_rules(g, mu, &gens, &rules)?;
            closed_pair(g, mu, psi, &inst.name)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sort_pairs(pairs))
}

/// Pairs for the degree-`p^2` classes of families 7, 8 and 10: one per Galois class
/// of `mu` in `Irr(Z(G)) \ {1}`, with the tabulated `H` (families 7, 8) or `H = G'` (family 10).
pub fn camina_pairs(inst: &GroupInstance) -> Result<Vec<RequiredPair>> {
    let g = &inst.group;
    let z = g.center();
    let mus = mu_representatives(g, &z, &|m| m.order() > 1, &|_| true)?;
    let pairs = match inst.family.index() {
        7 | 8 => {
            let h = inst.subgroup("H").map_err(|_| Error::Unsupported(format!("no tabulated subgroup for {}", inst.name)))?;
            mus.iter()
                .map(|mu| {
                    let psi = psi_from_rules(g, mu, h.gens(), &default_rules(&z, h.gens()))?;
                    closed_pair(g, mu, psi, &inst.name)
                })
                .collect::<Result<Vec<_>>>()?
        }
        10 if g.p() < 5 => {
            return Err(Error::Unsupported("the pair (G', psi) for family 10 needs p >= 5".into()));
        }
        10 => {
            let d = g.derived_subgroup();
            if !g.is_abelian(&d) {
                return Err(Error::Inconsistent("G' is not abelian".into()));
            }
            let lin = abelianization_characters(g, &d)?;
            let ind = Inducer::new(g, &d);
            mus.iter()
                .map(|mu| {
                    lin.iter()
                        .filter(|psi| z.members().iter().all(|&x| psi.exponent_at(x) == mu.exponent_at(x)))
                        .find_map(|psi| ind.try_pair(psi))
                        .ok_or_else(|| Error::Verification(format!("{}: no psi on G' over mu is a required pair", inst.name)))
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => return Err(Error::Dispatch(format!("{} is in {}, not a Camina family", inst.name, inst.family))),
    };
    Ok(sort_pairs(pairs))
}

/// Pairs on `C_G(G')` for families 3 and 9: one per Galois class of `psi^G` over
/// `psi` in `Irr(C_G(G') | G')`, with the count `|Irr(C_G(G')|G')| = p |nl(G)|`.
/// `psi_filter` restricts the characters considered.
pub fn abelian_index_p_pairs_filtered(
    inst: &GroupInstance,
    psi_filter: &dyn Fn(&LinearCharacter) -> bool,
) -> Result<Vec<RequiredPair>> {
    let f = inst.family.index();
    if f != 3 && f != 9 {
        return Err(Error::Dispatch(format!("{} is in {}, not family 3 or 9", inst.name, inst.family)));
    }
    let g = &inst.group;
    if g.p() < 5 {
        return Err(Error::Dispatch("the closed form on C_G(G') needs p >= 5".into()));
    }
    let d = g.derived_subgroup();
    let c = g.centralizer(&d);
    if c.order() * g.p() as usize != g.order() || !g.is_abelian(&c) {
        return Err(Error::Inconsistent("C_G(G') is not abelian of index p".into()));
    }
    let lin = abelianization_characters(g, &c)?;
    let over: Vec<&LinearCharacter> = lin.iter().filter(|psi| !psi.is_trivial_on(&d)).collect();
    let nonlinear = g.char_degree_counts()?.get(&(g.p() as u64)).copied().unwrap_or(0);
    if over.len() as u64 != g.p() as u64 * nonlinear {
        return Err(Error::Invariant(format!(
            "|Irr(C_G(G')|G')| = {} differs from p |nl(G)| = {}",
            over.len(),
            g.p() as u64 * nonlinear
        )));
    }
    let ind = Inducer::new(g, &c);
    let mut found: BTreeMap<Vec<i64>, RequiredPair> = BTreeMap::new();
    for psi in over.into_iter().filter(|p| psi_filter(p)) {
        if let Some(pair) = ind.try_pair(psi) {
            found.entry(pair.key.clone()).or_insert(pair);
        }
    }
    Ok(sort_pairs(found.into_values().collect()))
}

pub fn abelian_index_p_pairs(inst: &GroupInstance) -> Result<Vec<RequiredPair>> {
    abelian_index_p_pairs_filtered(inst, &|_| true)
}

/// Subgroups of order `p` in `Z(G)`.
pub fn central_subgroups_of_order_p(g: &PcGroup) -> Vec<Subgroup> {
    let z = g.center();
    let p = g.p() as u64;
    let mut out: Vec<Subgroup> = Vec::new();
    for &x in z.members() {
        if g.element_order(x) == p && g.cyclic_id(x) == x {
            out.push(g.closure(&[x]));
        }
    }
    out
}

fn union_of_lifts(g: &PcGroup, ks: &[Subgroup]) -> Result<Vec<RequiredPair>> {
    let lists = ks.iter().map(|k| quotient_lift_pairs(g, k)).collect::<Result<Vec<_>>>()?;
    Ok(merge(lists))
}

/// Production route: the family's closed form where one applies, completed with the
/// linear pairs and checked against the cyclic subgroup class count. Falls back to
/// the search (recording why) where no closed form applies.
pub fn required_pairs(inst: &GroupInstance) -> Result<PairSet> {
    match closed_form_pairs(inst) {
        Ok(pairs) => Ok(PairSet { pairs, route: Route::ClosedForm, note: None }),
        Err(Error::Unsupported(m)) | Err(Error::Dispatch(m)) => {
            Ok(PairSet { pairs: generic_search(&inst.group)?, route: Route::Search, note: Some(m) })
        }
        Err(e) => Err(e),
    }
}

/// The closed-form pairs for every Galois class.
pub fn closed_form_pairs(inst: &GroupInstance) -> Result<Vec<RequiredPair>> {
    let g = &inst.group;
    let p = g.p();
    let linear = linear_pairs(g)?;
    let z = g.center();
    let nonlinear: Vec<RequiredPair> = match inst.family.index() {
        1 => Vec::new(),
        2 | 5 => vz_pairs(inst)?,
        4 | 6 => union_of_lifts(g, &central_subgroups_of_order_p(g))?,
        7 | 8 | 10 => {
            let mut v = quotient_lift_pairs(g, &z)?;
            v.extend(camina_pairs(inst)?);
            v
        }
        3 | 9 if p < 5 => {
            return Err(Error::Unsupported(format!("closed forms for {} need p >= 5", inst.family)));
        }
        3 => match inst.name.as_str() {
            "Phi_3(311)b_1" | "Phi_3(311)b_nu" => {
                let a1 = inst.element("alpha1")?;
                let top = g.element_order(a1);
                let mut v = abelian_index_p_pairs_filtered(inst, &|psi| {
                    let e = psi.exponent_at(a1).unwrap();
                    psi.modulus() / e.gcd(&psi.modulus()) == top
                })?;
                let k = g.closure(&[g.pow(a1, (p * p) as i64)]);
                v.extend(quotient_lift_pairs(g, &k)?);
                v
            }
            "Phi_3(221)a" | "Phi_3(2111)e" => union_of_lifts(g, &central_subgroups_of_order_p(g))?,
            _ => abelian_index_p_pairs(inst)?,
        },
        9 => abelian_index_p_pairs(inst)?,
        _ => unreachable!("family index in 1..=10"),
    };
    let pairs = merge(vec![linear, nonlinear]);
    check_count(&pairs, g.cyclic_subgroup_classes().count(), &format!("closed form for {}", inst.name))?;
    Ok(pairs)
}

/// Independent check of a pair through exact cyclotomic class functions:
/// `<psi^G, psi^G> = 1`, `psi^G(1) = [G:H]`, `Q(psi^G) = Q(psi)`, and the recorded
/// `Omega` key. Returns `psi^G`.
pub fn verify_pair(g: &PcGroup, pair: &RequiredPair) -> Result<ClassFunction> {
    let chi = induce(g, &pair.psi)?;
    let ip = character_inner_product(g, &chi, &chi)?;
    if ip != 1 {
        return Err(Error::Verification(format!("<psi^G, psi^G> = {ip}")));
    }
    let index = (g.order() / pair.subgroup.order()) as i64;
    if chi.degree() != Rational64::from_integer(index) || index as u64 != pair.degree {
        return Err(Error::Verification(format!("psi^G(1) = {} but [G:H] = {index}", chi.degree())));
    }
    let d_chi = chi.field_of_values()?;
    if d_chi != pair.psi.order() || d_chi != pair.d {
        return Err(Error::Verification(format!("Q(psi^G) = Q(zeta_{d_chi}) but Q(psi) = Q(zeta_{})", pair.psi.order())));
    }
    let om = omega_values(&chi)?;
    let key: Vec<i64> = om
        .iter()
        .map(|r| if r.is_integer() { Ok(r.to_integer()) } else { Err(Error::Verification("Omega is not integral".into())) })
        .collect::<Result<_>>()?;
    if key != pair.key {
        return Err(Error::Verification("Omega key disagrees with the class-function route".into()));
    }
    Ok(chi)
}

/// The orbit keys of a pair list, in order.
pub fn orbit_keys(pairs: &[RequiredPair]) -> Vec<(u64, u64, Vec<i64>)> {
    pairs.iter().map(|p| (p.degree, p.d, p.key.clone())).collect()
}
