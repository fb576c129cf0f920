//! Rational matrix representations from required pairs: the companion-matrix
//! model of a linear character, block induction, and verification.

use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{inv_mod, phi_prime_power, prime_power};
use crate::character::{omega_values, ClassFunction, LinearCharacter};
use crate::error::{Error, Result};
use crate::pairs::{verify_pair, RequiredPair};
use crate::pc::{Elem, PcGroup};

/// A square matrix of exact rationals, stored by rows of sorted nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    rows: Vec<Vec<(u32, Rational64)>>,
}

impl RationalMatrix {
    pub fn zero(dim: usize) -> Self {
        RationalMatrix { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        RationalMatrix { dim, rows: (0..dim).map(|i| vec![(i as u32, Rational64::one())]).collect() }
    }

    /// Builds from row-major dense entries.
    pub fn from_dense(dim: usize, entries: &[Rational64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Usage(format!("{} entries for a {dim}x{dim} matrix", entries.len())));
        }
        let rows = entries
            .chunks(dim)
            .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, &x)| (j as u32, x)).collect())
            .collect();
        Ok(RationalMatrix { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational64 {
        self.rows[i]
            .binary_search_by_key(&(j as u32), |e| e.0)
            .map(|k| self.rows[i][k].1)
            .unwrap_or_else(|_| Rational64::zero())
    }

    /// Nonzero entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> &[(u32, Rational64)] {
        &self.rows[i]
    }

    pub fn to_dense(&self) -> Vec<Rational64> {
        let mut out = vec![Rational64::zero(); self.dim * self.dim];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, x) in r {
                out[i * self.dim + j as usize] = x;
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = vec![Rational64::zero(); self.dim];
        let mut touched: Vec<u32> = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                for &(k, a) in r {
                    for &(j, b) in &other.rows[k as usize] {
                        if acc[j as usize].is_zero() {
                            touched.push(j);
                        }
                        acc[j as usize] += a * b;
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                let row = touched
                    .iter()
                    .filter(|&&j| !acc[j as usize].is_zero())
                    .map(|&j| (j, acc[j as usize]))
                    .collect();
                for &j in &touched {
                    acc[j as usize] = Rational64::zero();
                }
                touched.clear();
                row
            })
            .collect();
        RationalMatrix { dim: self.dim, rows }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut out = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn trace(&self) -> Rational64 {
        (0..self.dim).map(|i| self.entry(i, i)).fold(Rational64::zero(), |a, b| a + b)
    }

    /// `trace(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Rational64 {
        let mut t = Rational64::zero();
        for (i, r) in self.rows.iter().enumerate() {
            for &(k, a) in r {
                t += a * other.entry(k as usize, i);
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|(_, x)| x.is_integer())
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// The `size x size` block at block position `(bi, bj)`.
    pub fn block(&self, bi: usize, bj: usize, size: usize) -> Self {
        let lo = (bj * size) as u32;
        let hi = lo + size as u32;
        let rows = (bi * size..(bi + 1) * size)
            .map(|i| self.rows[i].iter().filter(|e| e.0 >= lo && e.0 < hi).map(|&(j, x)| (j - lo, x)).collect())
            .collect();
        RationalMatrix { dim: size, rows }
    }

    /// Dense text: one line per row, entries `num/den` separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| rational_cell(self.entry(i, j))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

fn rational_cell(x: Rational64) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Companion matrix of the `d`-th cyclotomic polynomial `X^s - a_{s-1} X^{s-1} - ... - a_0`:
/// ones on the superdiagonal and bottom row `(a_0, ..., a_{s-1})`.
pub fn companion_matrix(d: u64) -> RationalMatrix {
    companion_power(d, 1)
}

/// `C^k` for the companion matrix `C` of `Phi_d`. Row `i` holds the coordinates of
/// `x^(i+k)` reduced modulo `Phi_d`, using `x^(phi + r) = -sum_{j < p-1} x^(r + j d/p)`.
pub fn companion_power(d: u64, k: u64) -> RationalMatrix {
    if d == 1 {
        return RationalMatrix::identity(1);
    }
    let (p, _) = prime_power(d).expect("prime power order");
    let phi = phi_prime_power(d);
    let step = d / p;
    let rows = (0..phi)
        .map(|i| {
            let m = (i + k) % d;
            if m < phi {
                vec![(m as u32, Rational64::one())]
            } else {
                let r = m - phi;
                (0..p - 1).map(|j| ((r + j * step) as u32, -Rational64::one())).collect()
            }
        })
        .collect();
    RationalMatrix { dim: phi as usize, rows }
}

/// The companion-matrix representation `Psi` of a linear character `psi` of `H`:
/// with `y` the least element whose value generates the image of `psi`,
/// `Psi(h) = C^i` when `psi(h) = psi(y)^i`.
#[derive(Clone, Debug)]
pub struct CompanionRep {
    pub psi: LinearCharacter,
    /// The chosen generator of `H / ker psi`.
    pub y: Elem,
    pub d: u64,
    /// `psi(y) = zeta_d^u`.
    u: u64,
}

impl CompanionRep {
    pub fn new(psi: &LinearCharacter) -> Result<Self> {
        let d = psi.order();
        let n = psi.modulus();
        let step = n / d;
        let y = psi
            .subgroup()
            .members()
            .iter()
            .copied()
            .find(|&x| {
                let v = psi.exponent_at(x).unwrap();
                (v / step).gcd(&d) == 1 || d == 1
            })
            .ok_or_else(|| Error::Usage("character has no generating value".into()))?;
        let u = if d == 1 { 0 } else { psi.exponent_at(y).unwrap() / step };
        Ok(CompanionRep { psi: psi.clone(), y, d, u })
    }

    pub fn dim(&self) -> usize {
        phi_prime_power(self.d) as usize
    }

    /// `i` with `psi(h) = psi(y)^i`, or `None` off `H`.
    pub fn exponent(&self, h: Elem) -> Option<u64> {
        let v = self.psi.exponent_at(h)?;
        if self.d == 1 {
            return Some(0);
        }
        let step = self.psi.modulus() / self.d;
        Some((v / step) * inv_mod(self.u, self.d) % self.d)
    }

    pub fn image(&self, h: Elem) -> Option<RationalMatrix> {
        self.exponent(h).map(|i| companion_power(self.d, i))
    }
}

/// An irreducible rational representation given by its images of the pc-generators.
#[derive(Clone, Debug)]
pub struct RationalRep {
    pub group_id: u64,
    pub degree: usize,
    pub images: Vec<RationalMatrix>,
    /// Degree `chi(1)` of the complex constituents.
    pub chi_degree: u64,
    /// `Q(chi) = Q(zeta_d)`.
    pub d: u64,
    /// `Omega(chi)` at the class representatives.
    pub key: Vec<i64>,
    pub transversal: Vec<Elem>,
    pub companion: CompanionRep,
}

impl RationalRep {
    /// Image of an arbitrary element through its normal form.
    pub fn image_of(&self, g: &PcGroup, x: Elem) -> RationalMatrix {
        let mut m = RationalMatrix::identity(self.degree);
        for (k, &e) in g.exponents(x).iter().enumerate() {
            for _ in 0..e {
                m = m.mul(&self.images[k]);
            }
        }
        m
    }

    fn word_image(&self, w: &[u32]) -> RationalMatrix {
        let mut m = RationalMatrix::identity(self.degree);
        for (k, &e) in w.iter().enumerate() {
            for _ in 0..e {
                m = m.mul(&self.images[k]);
            }
        }
        m
    }

    /// Block size `[Q(chi):Q]` in the block-monomial form.
    pub fn block_size(&self) -> usize {
        self.companion.dim()
    }
}

/// Block induction: block `(i, j)` of `rho(g)` is `Psi(t_i^-1 g t_j)` when that lies in
/// `H` and zero otherwise, over the least-index left transversal `t_0, t_1, ...`.
pub fn induce_rep(g: &PcGroup, comp: &CompanionRep) -> Result<RationalRep> {
    let h = comp.psi.subgroup();
    let transversal = g.left_transversal(h);
    let s = comp.dim();
    let k = transversal.len();
    let mut coset_of = vec![u32::MAX; g.order()];
    for (i, &t) in transversal.iter().enumerate() {
        for &m in h.members() {
            coset_of[g.mul(t, m) as usize] = i as u32;
        }
    }
    let images = g
        .gens()
        .iter()
        .map(|&x| {
            let mut rows: Vec<Vec<(u32, Rational64)>> = vec![Vec::new(); k * s];
            for (j, &tj) in transversal.iter().enumerate() {
                let xt = g.mul(x, tj);
                let i = coset_of[xt as usize] as usize;
                let inner = g.mul(g.inv(transversal[i]), xt);
                let block = comp.image(inner).ok_or_else(|| Error::Inconsistent("coset bookkeeping left H".into()))?;
                for r in 0..s {
                    rows[i * s + r].extend(block.row(r).iter().map(|&(c, v)| (c + (j * s) as u32, v)));
                }
            }
            for r in &mut rows {
                r.sort_unstable_by_key(|e| e.0);
            }
            Ok(RationalMatrix { dim: k * s, rows })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalRep {
        group_id: g.id(),
        degree: k * s,
        images,
        chi_degree: k as u64,
        d: comp.d,
        key: Vec::new(),
        transversal,
        companion: comp.clone(),
    })
}

/// Checks every power and commutator relation of the presentation on the images:
/// `rho(g_i)^p = rho(w_i)` and `rho(g_j) rho(g_i) = rho(g_i) rho(g_j) rho(w_ji)`.
pub fn verify_relations(g: &PcGroup, rep: &RationalRep) -> Result<()> {
    let pres = g.presentation();
    let p = g.p() as u64;
    for i in 0..g.ngens() {
        if rep.images[i].pow(p) != rep.word_image(pres.power(i)) {
            return Err(Error::Verification(format!("power relation of g{} fails", i + 1)));
        }
        for j in i + 1..g.ngens() {
            let lhs = rep.images[j].mul(&rep.images[i]);
            let rhs = rep.images[i].mul(&rep.images[j]).mul(&rep.word_image(pres.commutator(j, i)));
            if lhs != rhs {
                return Err(Error::Verification(format!("commutator relation [g{}, g{}] fails", j + 1, i + 1)));
            }
        }
    }
    Ok(())
}

/// Traces at the class representatives, each image formed from the generator images.
pub fn rep_character(g: &PcGroup, rep: &RationalRep) -> Vec<Rational64> {
    let p = g.p() as usize;
    let powers: Vec<Vec<RationalMatrix>> = rep
        .images
        .iter()
        .map(|m| {
            let mut v = vec![RationalMatrix::identity(rep.degree)];
            for e in 1..p {
                let next = v[e - 1].mul(m);
                v.push(next);
            }
            v
        })
        .collect();
    g.conjugacy_classes()
        .reps
        .iter()
        .map(|&c| {
            let ex = g.exponents(c);
            let factors: Vec<&RationalMatrix> =
                ex.iter().enumerate().filter(|(_, &e)| e != 0).map(|(k, &e)| &powers[k][e as usize]).collect();
            match factors.len() {
                0 => Rational64::from_integer(rep.degree as i64),
                1 => factors[0].trace(),
                _ => {
                    let mut m = factors[0].clone();
                    for f in &factors[1..factors.len() - 1] {
                        m = m.mul(f);
                    }
                    m.trace_of_product(factors[factors.len() - 1])
                }
            }
        })
        .collect()
}

/// Checks that the traces equal `Omega(chi)` class by class.
pub fn verify_affords(g: &PcGroup, rep: &RationalRep, chi: &ClassFunction) -> Result<()> {
    let traces = rep_character(g, rep);
    let omega = omega_values(chi)?;
    for (c, (t, o)) in traces.iter().zip(&omega).enumerate() {
        if t != o {
            return Err(Error::Verification(format!(
                "trace {t} differs from Omega(chi) = {o} on class {c} (representative {})",
                g.conjugacy_classes().reps[c]
            )));
        }
    }
    Ok(())
}

/// All entries are integers.
pub fn integrality_check(rep: &RationalRep) -> bool {
    rep.images.iter().all(RationalMatrix::is_integral)
}

/// Builds and fully verifies the representation of one pair.
pub fn build_rep(g: &PcGroup, pair: &RequiredPair) -> Result<RationalRep> {
    let chi = verify_pair(g, pair)?;
    let comp = CompanionRep::new(&pair.psi)?;
    let mut rep = induce_rep(g, &comp)?;
    rep.key = pair.key.clone();
    let expected = pair.degree * phi_prime_power(pair.d);
    if rep.degree as u64 != expected {
        return Err(Error::Verification(format!("degree {} but chi(1)[Q(chi):Q] = {expected}", rep.degree)));
    }
    verify_relations(g, &rep)?;
    verify_affords(g, &rep, &chi)?;
    if !integrality_check(&rep) {
        return Err(Error::Verification("non-integral entry".into()));
    }
    Ok(rep)
}

/// One verified representation per pair, with completeness, pairwise distinct
/// characters, and `sum chi(1)^2 [Q(chi):Q] = |G|`.
pub fn all_rational_irreps(g: &PcGroup, pairs: &[RequiredPair]) -> Result<Vec<RationalRep>> {
    g.conjugacy_classes();
    let reps = pairs.par_iter().map(|pair| build_rep(g, pair)).collect::<Result<Vec<_>>>()?;
    let expected = g.cyclic_subgroup_classes().count();
    if reps.len() != expected {
        return Err(Error::Incomplete(format!("{} representations for {expected} cyclic subgroup classes", reps.len())));
    }
    let mut keys: Vec<&Vec<i64>> = reps.iter().map(|r| &r.key).collect();
    keys.sort();
    keys.dedup();
    if keys.len() != reps.len() {
        return Err(Error::Verification("two representations share a character".into()));
    }
    let total: u64 = reps.iter().map(|r| r.chi_degree * r.chi_degree * phi_prime_power(r.d)).sum();
    if total != g.order() as u64 {
        return Err(Error::Verification(format!("sum chi(1)^2 [Q(chi):Q] = {total}, not |G|")));
    }
    Ok(reps)
}

/// Export text: a manifest header, then per generator a dimension line and the
/// dense rows as `num/den`.
pub fn export_text(group: &str, orbit: usize, rep: &RationalRep) -> String {
    let mut s = String::new();
    writeln!(s, "group {group}").unwrap();
    writeln!(s, "orbit {orbit}").unwrap();
    writeln!(s, "degree {}", rep.degree).unwrap();
    writeln!(s, "chi_degree {}", rep.chi_degree).unwrap();
    writeln!(s, "d {}", rep.d).unwrap();
    writeln!(s, "generators {}", rep.images.len()).unwrap();
    for (k, m) in rep.images.iter().enumerate() {
        writeln!(s, "matrix g{} {}", k + 1, m.dim()).unwrap();
        s.push_str(&m.to_text());
    }
    s
}

/// Parses the matrices of an export file, in generator order.
pub fn parse_export(text: &str) -> Result<Vec<RationalMatrix>> {
    let mut out = Vec::new();
    let mut lines = text.lines();
    while let Some(line) = lines.next() {
        if let Some(rest) = line.strip_prefix("matrix ") {
            let dim: usize = rest
                .split_whitespace()
                .nth(1)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad matrix header {line:?}")))?;
            let mut entries = Vec::with_capacity(dim * dim);
            for _ in 0..dim {
                let row = lines.next().ok_or_else(|| Error::Parse("truncated matrix".into()))?;
                for cell in row.split_whitespace() {
                    entries.push(
                        crate::cyclotomic::parse_rational(cell).ok_or_else(|| Error::Parse(format!("bad entry {cell:?}")))?,
                    );
                }
            }
            out.push(RationalMatrix::from_dense(dim, &entries)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> Rational64 {
        Rational64::from_integer(x)
    }

    #[test]
    fn companion_of_three() {
        let c = companion_matrix(3);
        assert_eq!(c.to_dense(), vec![r(0), r(1), r(-1), r(-1)]);
        assert!(c.pow(3).is_identity());
        assert!(!c.is_identity());
    }

    #[test]
    fn companion_of_nine() {
        let c = companion_matrix(9);
        assert_eq!(c.dim(), 6);
        let bottom: Vec<Rational64> = (0..6).map(|j| c.entry(5, j)).collect();
        assert_eq!(bottom, vec![r(-1), r(0), r(0), r(-1), r(0), r(0)]);
        assert!(c.pow(9).is_identity());
        assert!(!c.pow(3).is_identity());
        for k in 0..20 {
            assert_eq!(companion_power(9, k), c.pow(k));
        }
    }

    #[test]
    fn trace_of_product_matches() {
        let a = companion_power(25, 3);
        let b = companion_power(25, 7);
        assert_eq!(a.trace_of_product(&b), a.mul(&b).trace());
        assert_eq!(a.mul(&b).trace(), companion_power(25, 10).trace());
    }

    #[test]
    fn export_round_trip() {
        let m = companion_matrix(5);
        let rep_text = format!("matrix g1 {}\n{}", m.dim(), m.to_text());
        assert_eq!(parse_export(&rep_text).unwrap(), vec![m]);
    }
}
