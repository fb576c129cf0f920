//! Wedderburn decomposition of `QG` by family formulas and by the per-orbit oracle.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::phi_prime_power;
use crate::catalog::GroupInstance;
use crate::error::{Error, Result};
use crate::pairs::{central_subgroups_of_order_p, RequiredPair};
use crate::pc::{PcGroup, Subgroup};

/// The simple component `M_n(Q(zeta_d))`; `d = 1` encodes `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub n: u64,
    pub d: u64,
}

impl Component {
    pub fn new(n: u64, d: u64) -> Self {
        Component { n, d }
    }

    /// Dimension over `Q`.
    pub fn dimension(&self) -> u64 {
        self.n * self.n * phi_prime_power(self.d)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = if self.d == 1 { "Q".to_string() } else { format!("Q(zeta_{})", self.d) };
        if self.n == 1 {
            write!(f, "{field}")
        } else {
            write!(f, "M_{}({field})", self.n)
        }
    }
}

/// A multiset of components.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    parts: BTreeMap<Component, u64>,
}

impl Decomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_components(items: impl IntoIterator<Item = (Component, u64)>) -> Self {
        let mut d = Self::new();
        for (c, m) in items {
            d.add(c, m);
        }
        d
    }

    pub fn add(&mut self, c: Component, mult: u64) {
        if mult > 0 {
            *self.parts.entry(c).or_default() += mult;
        }
    }

    pub fn extend(&mut self, other: &Decomposition) {
        for (&c, &m) in &other.parts {
            self.add(c, m);
        }
    }

    /// Components with multiplicities, sorted by `(n, d)`.
    pub fn components(&self) -> impl Iterator<Item = (Component, u64)> + '_ {
        self.parts.iter().map(|(&c, &m)| (c, m))
    }

    pub fn multiplicity(&self, c: Component) -> u64 {
        self.parts.get(&c).copied().unwrap_or(0)
    }

    /// Number of simple components counted with multiplicity.
    pub fn count(&self) -> u64 {
        self.parts.values().sum()
    }

    /// `sum n^2 phi(d)` with multiplicity.
    pub fn dimension(&self) -> u64 {
        self.parts.iter().map(|(c, m)| c.dimension() * m).sum()
    }

    /// Components with `n = 1`.
    pub fn commutative_part(&self) -> Decomposition {
        Self::from_components(self.components().filter(|(c, _)| c.n == 1))
    }

    /// Components with `n > 1`.
    pub fn matrix_part(&self) -> Decomposition {
        Self::from_components(self.components().filter(|(c, _)| c.n > 1))
    }

    /// `M_n(Q(zeta_d)) x m` lines followed by the dimension identity.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (c, m) in self.components() {
            s.push_str(&format!("{c} x {m}\n"));
        }
        s.push_str(&self.identity_line());
        s.push('\n');
        s
    }

    /// `sum n^2 phi(d) = a + b + ... = total`.
    pub fn identity_line(&self) -> String {
        let terms: Vec<String> = self.components().map(|(c, m)| (c.dimension() * m).to_string()).collect();
        format!("dimension {} = {}", terms.join(" + "), self.dimension())
    }

    /// Checks `sum n^2 phi(d) = |G|` and the component count.
    pub fn check_invariants(&self, g: &PcGroup) -> Result<()> {
        if self.dimension() != g.order() as u64 {
            return Err(Error::Invariant(format!("dimension {} differs from |G| = {}", self.dimension(), g.order())));
        }
        let classes = g.cyclic_subgroup_classes().count() as u64;
        if self.count() != classes {
            return Err(Error::Invariant(format!("{} components for {classes} cyclic subgroup classes", self.count())));
        }
        Ok(())
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.components().map(|(c, m)| if m == 1 { c.to_string() } else { format!("{m}{c}") }).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn commutative_from_counts(counts: &BTreeMap<u64, u64>) -> Decomposition {
    Decomposition::from_components(counts.iter().map(|(&d, &a)| (Component::new(1, d), a)))
}

/// Components `(n, d)` with multiplicity `(a_d(A/K) - a_d(A/B)) / divisor`, over `d > 1`.
fn difference_part(g: &PcGroup, a: &Subgroup, k: &Subgroup, b: &Subgroup, n: u64, divisor: u64) -> Result<Decomposition> {
    let top = g.cyclic_counts_mod(a, k);
    let bottom = g.cyclic_counts_mod(a, b);
    let mut out = Decomposition::new();
    for (&d, &ad) in &top {
        let diff = ad
            .checked_sub(bottom.get(&d).copied().unwrap_or(0))
            .ok_or_else(|| Error::Invariant(format!("negative cyclic-count difference at order {d}")))?;
        if diff % divisor != 0 {
            return Err(Error::Invariant(format!("multiplicity {diff}/{divisor} at order {d} is not integral")));
        }
        out.add(Component::new(n, d), diff / divisor);
    }
    Ok(out)
}

fn isqrt_exact(x: u64) -> Result<u64> {
    let r = (x as f64).sqrt().round() as u64;
    if r * r == x {
        Ok(r)
    } else {
        Err(Error::Invariant(format!("{x} is not a square")))
    }
}

/// `QA = sum_d a_d Q(zeta_d)` with `a_d` the number of cyclic subgroups of order `d`.
pub fn perlis_walker(g: &PcGroup) -> Result<Decomposition> {
    if !g.is_abelian(&g.whole()) {
        return Err(Error::Dispatch("Perlis-Walker needs an abelian group".into()));
    }
    Ok(commutative_from_counts(&g.cyclic_counts_mod(&g.whole(), &g.trivial())))
}

/// `Q(G/G')`.
pub fn linear_part(g: &PcGroup) -> Decomposition {
    commutative_from_counts(&g.cyclic_counts_mod(&g.whole(), &g.derived_subgroup()))
}

/// Nonlinear part of a VZ group: `(sqrt|G/Z|, d)` with multiplicity `a_d(Z) - a_d(Z/G')`.
fn vz_nonlinear(g: &PcGroup, z: &Subgroup, k: &Subgroup, derived: &Subgroup) -> Result<Decomposition> {
    let n = isqrt_exact((g.order() / z.order()) as u64)?;
    difference_part(g, z, k, derived, n, 1)
}

/// VZ groups: `Q(G/G')` plus `(sqrt|G/Z|, d)` with multiplicity `a_d - a'_d`, counting
/// cyclic subgroups of `Z(G)` and `Z(G)/G'`.
pub fn vz_decomposition(g: &PcGroup) -> Result<Decomposition> {
    if g.is_abelian(&g.whole()) || !crate::character::is_vz_group(g) {
        return Err(Error::Dispatch("VZ formula needs a non-abelian VZ group".into()));
    }
    let mut out = linear_part(g);
    out.extend(&vz_nonlinear(g, &g.center(), &g.trivial(), &g.derived_subgroup())?);
    Ok(out)
}

fn central_order_p(g: &PcGroup) -> Result<Vec<Subgroup>> {
    let ks = central_subgroups_of_order_p(g);
    if ks.len() != g.p() as usize + 1 {
        return Err(Error::Dispatch(format!("{} central subgroups of order p, expected p+1", ks.len())));
    }
    Ok(ks)
}

/// `Z(G) = G'` elementary of order `p^2`: sum over central `K` of order `p` of the VZ
/// counts of `Z(G/K)` and `Z(G/K)/(G/K)'`.
pub fn phi4_decomposition(g: &PcGroup) -> Result<Decomposition> {
    let derived = g.derived_subgroup();
    if g.center() != derived || derived.order() != (g.p() * g.p()) as usize {
        return Err(Error::Dispatch("formula needs Z(G) = G' of order p^2".into()));
    }
    let mut out = linear_part(g);
    for k in central_order_p(g)? {
        let zk = g.centralizer_mod(&g.whole(), &k);
        out.extend(&vz_nonlinear(g, &zk, &k, &derived)?);
    }
    Ok(out)
}

/// `Z(G)` of order `p^2` inside `G'` of order `p^3`: per central `K` of order `p`,
/// `C/K = C_{G/K}(G'/K)` contributes `(p, d)` with multiplicity `(a_d(C/K) - a_d(C/Z))/p`;
/// `G/Z(G)` adds one `M_p(Q(zeta_p))`.
pub fn phi6_decomposition(g: &PcGroup) -> Result<Decomposition> {
    let p = g.p() as u64;
    let z = g.center();
    let derived = g.derived_subgroup();
    if z.order() as u64 != p * p || derived.order() as u64 != p * p * p || !z.is_subgroup_of(&derived) {
        return Err(Error::Dispatch("formula needs Z(G) of order p^2 inside G' of order p^3".into()));
    }
    let mut out = linear_part(g);
    for k in central_order_p(g)? {
        let c = g.centralizer_mod(&derived, &k);
        out.extend(&difference_part(g, &c, &k, &z, p, p)?);
    }
    out.add(Component::new(p, p), 1);
    Ok(out)
}

/// `C = C_G(G')` abelian of index `p`: `(p, d)` with multiplicity `(a_d(C) - a_d(C/G'))/p`.
fn abelian_centralizer_part(g: &PcGroup) -> Result<Decomposition> {
    let p = g.p() as u64;
    let derived = g.derived_subgroup();
    let c = g.centralizer(&derived);
    if !g.is_abelian(&c) || (g.order() / c.order()) as u64 != p {
        return Err(Error::Dispatch("formula needs C_G(G') abelian of index p".into()));
    }
    difference_part(g, &c, &g.trivial(), &derived, p, p)
}

fn require_p5(g: &PcGroup, what: &str) -> Result<()> {
    if g.p() < 5 {
        return Err(Error::Unsupported(format!("{what} closed form needs p >= 5; use the oracle")));
    }
    Ok(())
}

/// Family three by member: `(311)b_r`, `(221)a` and `(2111)e` verbatim, otherwise the
/// abelian-centralizer count.
pub fn phi3_decomposition(inst: &GroupInstance) -> Result<Decomposition> {
    let g = &inst.group;
    require_p5(g, "Phi_3")?;
    let p = g.p() as u64;
    let (p2, p3) = (p * p, p * p * p);
    let mut out = linear_part(g);
    match inst.name.as_str() {
        "Phi_3(311)b_1" | "Phi_3(311)b_nu" => {
            let expected = Decomposition::from_components([
                (Component::new(1, 1), 1),
                (Component::new(1, p), p + 1),
                (Component::new(1, p2), p),
            ]);
            if out != expected {
                return Err(Error::Invariant(format!("abelianization gives {out}, expected {expected}")));
            }
            out.add(Component::new(p, p), p);
            out.add(Component::new(p, p3), 1);
        }
        "Phi_3(221)a" | "Phi_3(2111)e" => {
            out.add(Component::new(p, p), 2 * p);
            out.add(Component::new(p, p2), p - 1);
        }
        _ => out.extend(&abelian_centralizer_part(g)?),
    }
    Ok(out)
}

/// Family nine: abelianization plus the abelian-centralizer count.
pub fn phi9_decomposition(g: &PcGroup) -> Result<Decomposition> {
    require_p5(g, "Phi_9")?;
    let mut out = linear_part(g);
    out.extend(&abelian_centralizer_part(g)?);
    Ok(out)
}

/// Families seven and eight: `Q(G/G') + p M_p(Q(zeta_p)) + M_{p^2}(Q(zeta_p))`.
pub fn phi7_phi8_decomposition(g: &PcGroup) -> Result<Decomposition> {
    let p = g.p() as u64;
    let mut out = linear_part(g);
    out.add(Component::new(p, p), p);
    out.add(Component::new(p * p, p), 1);
    Ok(out)
}

/// Family ten: `(p+1) M_p(Q(zeta_p)) + M_{p^2}(Q(zeta_p))` for `p >= 5`, and
/// `M_3(Q(zeta_3)) + M_3(Q(zeta_9)) + M_9(Q(zeta_3))` for `p = 3`, over `Q(G/G')`.
pub fn phi10_decomposition(g: &PcGroup) -> Result<Decomposition> {
    let p = g.p() as u64;
    let mut out = linear_part(g);
    if p == 3 {
        out.add(Component::new(3, 3), 1);
        out.add(Component::new(3, 9), 1);
        out.add(Component::new(9, 3), 1);
    } else {
        out.add(Component::new(p, p), p + 1);
        out.add(Component::new(p * p, p), 1);
    }
    Ok(out)
}

/// Family formula selected by the instance's family.
pub fn formula_decomposition(inst: &GroupInstance) -> Result<Decomposition> {
    let g = &inst.group;
    let out = match inst.family.index() {
        1 => perlis_walker(g)?,
        2 | 5 => vz_decomposition(g)?,
        3 => phi3_decomposition(inst)?,
        4 => phi4_decomposition(g)?,
        6 => phi6_decomposition(g)?,
        7 | 8 => phi7_phi8_decomposition(g)?,
        9 => phi9_decomposition(g)?,
        10 => phi10_decomposition(g)?,
        _ => unreachable!("family index in 1..=10"),
    };
    out.check_invariants(g)?;
    Ok(out)
}

/// One component `(chi(1), d)` per Galois orbit, read off the required pairs.
pub fn oracle_decomposition(g: &PcGroup, pairs: &[RequiredPair]) -> Result<Decomposition> {
    let out = Decomposition::from_components(pairs.iter().map(|pr| (Component::new(pr.degree, pr.d), 1)));
    out.check_invariants(g)?;
    Ok(out)
}

/// Both decompositions of one group.
#[derive(Clone, Debug)]
pub struct WedderburnReport {
    pub formula: Option<Decomposition>,
    /// Why no formula applies, if none does.
    pub formula_note: Option<String>,
    pub oracle: Decomposition,
}

impl WedderburnReport {
    /// The family formula when it applies, otherwise the oracle.
    pub fn decomposition(&self) -> &Decomposition {
        self.formula.as_ref().unwrap_or(&self.oracle)
    }
}

/// Runs the family formula and the oracle and requires agreement whenever both exist.
pub fn decompose(inst: &GroupInstance, pairs: &[RequiredPair]) -> Result<WedderburnReport> {
    let oracle = oracle_decomposition(&inst.group, pairs)?;
    let (formula, formula_note) = match formula_decomposition(inst) {
        Ok(f) => (Some(f), None),
        Err(Error::Unsupported(m)) | Err(Error::Dispatch(m)) => (None, Some(m)),
        Err(e) => return Err(e),
    };
    if let Some(f) = &formula {
        if *f != oracle {
            return Err(Error::Inconsistent(format!(
                "{}: formula {f} differs from oracle {oracle}",
                inst.name
            )));
        }
    }
    Ok(WedderburnReport { formula, formula_note, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pc::PcPresentation;

    fn cyclic(p: u32, k: usize) -> PcGroup {
        let mut pr = PcPresentation::new(p, k).unwrap();
        for i in 0..k - 1 {
            let mut w = vec![0; k];
            w[i + 1] = 1;
            pr.set_power(i, &w).unwrap();
        }
        PcGroup::new(pr).unwrap()
    }

    #[test]
    fn perlis_walker_of_cyclic() {
        let g = cyclic(3, 1);
        let d = perlis_walker(&g).unwrap();
        assert_eq!(d.to_string(), "Q + Q(zeta_3)");
        let g = cyclic(5, 3);
        let d = perlis_walker(&g).unwrap();
        assert_eq!(d.count(), 4);
        assert_eq!(d.dimension(), 125);
    }

    #[test]
    fn text_lines() {
        let d = Decomposition::from_components([(Component::new(1, 1), 1), (Component::new(3, 3), 2)]);
        assert_eq!(d.to_text(), "Q x 1\nM_3(Q(zeta_3)) x 2\ndimension 1 + 36 = 37\n");
    }

    #[test]
    fn vz_rejects_abelian() {
        assert!(matches!(vz_decomposition(&cyclic(3, 2)), Err(Error::Dispatch(_))));
    }
}
