//! Characters of p-groups: linear characters of subgroups, induction, inner
//! products, Galois orbits, and the Camina and VZ predicates.

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::arith::{phi_prime_power, prime_power};
use crate::cyclotomic::{field_of_values, CycNumber};
use crate::error::{Error, Result};
use crate::pc::{Elem, PcGroup, Subgroup};

const NONE: u32 = u32::MAX;

/// A basis of the abelian quotient `H/H'` with coordinates for every member of `H`.
#[derive(Clone, Debug)]
pub struct AbelianBasis {
    pub gens: Vec<Elem>,
    pub orders: Vec<u64>,
    /// `H'`, the kernel of the coordinate map.
    pub derived: Subgroup,
    coords: Vec<u32>,
}

impl AbelianBasis {
    /// Basis of `H/H'` by repeated extraction of an element of maximal order,
    /// corrected so that each new generator meets the span of the earlier ones trivially.
    pub fn new(g: &PcGroup, h: &Subgroup) -> Self {
        let mut comms = Vec::new();
        for (i, &a) in h.gens().iter().enumerate() {
            for &b in &h.gens()[..i] {
                comms.push(g.comm(a, b));
            }
        }
        let derived = {
            let mut cur = g.closure(&comms);
            loop {
                let extra: Vec<Elem> = cur
                    .gens()
                    .iter()
                    .flat_map(|&c| h.gens().iter().map(move |&x| (c, x)))
                    .map(|(c, x)| g.conj(c, x))
                    .filter(|&c| !cur.contains(c))
                    .collect();
                if extra.is_empty() {
                    break cur;
                }
                let mut all = cur.gens().to_vec();
                all.extend(extra);
                cur = g.closure(&all);
            }
        };
        let mut gens: Vec<Elem> = Vec::new();
        let mut orders: Vec<u64> = Vec::new();
        let mut span = derived.clone();
        while span.order() < h.order() {
            let x = *h
                .members()
                .iter()
                .max_by_key(|&&x| (g.order_mod(x, &span), std::cmp::Reverse(x)))
                .unwrap();
            let m = g.order_mod(x, &span);
            let target = g.pow(x, m as i64);
            let t = Self::solve(g, &gens, &orders, &derived, target).expect("power lies in the span");
            let mut y = x;
            for (i, &ti) in t.iter().enumerate() {
                debug_assert_eq!(ti % m, 0);
                y = g.mul(y, g.pow(gens[i], -((ti / m) as i64)));
            }
            gens.push(y);
            orders.push(m);
            let mut all = derived.gens().to_vec();
            all.extend(&gens);
            span = g.closure(&all);
        }
        let r = gens.len();
        let mut coords = vec![NONE; g.order() * r.max(1)];
        let total: u64 = orders.iter().product();
        for code in 0..total {
            let mut c = code;
            let mut t = Vec::with_capacity(r);
            let mut u = 0;
            for i in 0..r {
                let ti = c % orders[i];
                c /= orders[i];
                t.push(ti as u32);
                u = g.mul(u, g.pow(gens[i], ti as i64));
            }
            for &k in derived.members() {
                let x = g.mul(u, k) as usize;
                coords[x * r.max(1)..x * r.max(1) + r].copy_from_slice(&t);
            }
        }
        if r == 0 {
            for &k in derived.members() {
                coords[k as usize] = 0;
            }
        }
        AbelianBasis { gens, orders, derived, coords }
    }

    fn solve(g: &PcGroup, gens: &[Elem], orders: &[u64], k: &Subgroup, target: Elem) -> Option<Vec<u64>> {
        let total: u64 = orders.iter().product();
        for code in 0..total {
            let mut c = code;
            let mut t = Vec::with_capacity(gens.len());
            let mut u = 0;
            for i in 0..gens.len() {
                let ti = c % orders[i];
                c /= orders[i];
                t.push(ti);
                u = g.mul(u, g.pow(gens[i], ti as i64));
            }
            if k.contains(g.mul(g.inv(u), target)) {
                return Some(t);
            }
        }
        None
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Coordinates of `x` in `Z/o_1 x ... x Z/o_r`, or `None` off the subgroup.
    pub fn coords(&self, x: Elem) -> Option<&[u32]> {
        let r = self.gens.len();
        let w = r.max(1);
        let s = &self.coords[x as usize * w..x as usize * w + w];
        (s[0] != NONE).then(|| &s[..r])
    }

    /// Size of `H/H'`.
    pub fn quotient_order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent of `H/H'`.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().copied().max().unwrap_or(1)
    }
}

/// A linear character `psi` of a subgroup `H`, with values `zeta_n^v`.
#[derive(Clone, Debug)]
pub struct LinearCharacter {
    subgroup: Subgroup,
    n: u64,
    gens: Vec<Elem>,
    images: Vec<u64>,
    table: Vec<u32>,
    order: u64,
}

impl PartialEq for LinearCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.subgroup == other.subgroup && self.table == other.table
    }
}

impl Eq for LinearCharacter {}

impl LinearCharacter {
    /// The character with `psi(gens[i]) = zeta_n^images[i]`, checked to be a
    /// well-defined homomorphism on the subgroup generated by `gens`.
    pub fn from_images(g: &PcGroup, n: u64, gens: &[Elem], images: &[u64]) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(Error::Usage("one image per generator is required".into()));
        }
        let mut table = vec![NONE; g.order()];
        table[0] = 0;
        let mut members = vec![0];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            let vx = table[x as usize] as u64;
            for (k, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                let vy = ((vx + images[k]) % n) as u32;
                match table[y as usize] {
                    NONE => {
                        table[y as usize] = vy;
                        members.push(y);
                    }
                    v if v != vy => {
                        return Err(Error::Usage(format!(
                            "generator images do not define a homomorphism (conflict at element {y})"
                        )))
                    }
                    _ => {}
                }
            }
            i += 1;
        }
        let subgroup = g.closure(gens);
        let order = Self::order_of(n, table.iter().filter(|&&v| v != NONE).map(|&v| v as u64));
        Ok(LinearCharacter {
            subgroup,
            n,
            gens: gens.to_vec(),
            images: images.iter().map(|&a| a % n).collect(),
            table,
            order,
        })
    }

    /// The character with coordinates `a` against an abelian basis of `H/H'`.
    pub fn from_basis(g: &PcGroup, h: &Subgroup, basis: &AbelianBasis, n: u64, a: &[u64]) -> Result<Self> {
        let images: Vec<u64> = basis
            .orders
            .iter()
            .zip(a)
            .map(|(&o, &ai)| {
                if n % o != 0 {
                    Err(Error::Usage(format!("modulus {n} is not a multiple of generator order {o}")))
                } else {
                    Ok(ai % o * (n / o))
                }
            })
            .collect::<Result<_>>()?;
        let mut table = vec![NONE; g.order()];
        for &x in h.members() {
            let c = basis.coords(x).ok_or_else(|| Error::Usage("basis does not cover the subgroup".into()))?;
            let v = c.iter().zip(&images).map(|(&ci, &im)| ci as u64 * im).sum::<u64>() % n;
            table[x as usize] = v as u32;
        }
        let order = Self::order_of(n, images.iter().copied());
        Ok(LinearCharacter { subgroup: h.clone(), n, gens: basis.gens.clone(), images, table, order })
    }

    fn order_of(n: u64, values: impl Iterator<Item = u64>) -> u64 {
        let g = values.fold(n, num_integer::gcd);
        n / g
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Values are powers of `zeta_n` for this `n`.
    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// Order of `psi` in the dual group, which is also `d` with `Q(psi) = Q(zeta_d)`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    /// Generator images as cyclotomic numbers.
    pub fn images(&self) -> Vec<(Elem, CycNumber)> {
        self.gens
            .iter()
            .zip(&self.images)
            .map(|(&x, &a)| (x, CycNumber::root_of_unity(self.n, a as i64).expect("p-power modulus")))
            .collect()
    }

    /// Generator images as exponents of `zeta_n`.
    pub fn image_exponents(&self) -> &[u64] {
        &self.images
    }

    /// `v` with `psi(x) = zeta_n^v`, or `None` off the subgroup.
    #[inline]
    pub fn exponent_at(&self, x: Elem) -> Option<u64> {
        let v = self.table[x as usize];
        (v != NONE).then_some(v as u64)
    }

    pub fn value(&self, x: Elem) -> Option<CycNumber> {
        self.exponent_at(x).map(|v| CycNumber::root_of_unity(self.n, v as i64).expect("p-power modulus"))
    }

    pub fn kernel(&self, g: &PcGroup) -> Subgroup {
        let members = self.subgroup.members().iter().copied().filter(|&x| self.table[x as usize] == 0).collect();
        g.subgroup_from_members(members)
    }

    /// The Galois conjugate `psi^s` for `s` coprime to `p`.
    pub fn galois_conjugate(&self, s: u64) -> LinearCharacter {
        let n = self.n;
        let map = |v: u32| if v == NONE { NONE } else { ((v as u64 * s) % n) as u32 };
        LinearCharacter {
            subgroup: self.subgroup.clone(),
            n,
            gens: self.gens.clone(),
            images: self.images.iter().map(|&a| a * s % n).collect(),
            table: self.table.iter().map(|&v| map(v)).collect(),
            order: self.order,
        }
    }

    /// Restriction to a subgroup `k` of the domain.
    pub fn restrict(&self, k: &Subgroup) -> Result<LinearCharacter> {
        if !k.is_subgroup_of(&self.subgroup) {
            return Err(Error::Usage("restriction target is not contained in the domain".into()));
        }
        let table: Vec<u32> = (0..self.table.len()).map(|x| if k.contains(x as Elem) { self.table[x] } else { NONE }).collect();
        let images: Vec<u64> = k.gens().iter().map(|&x| self.table[x as usize] as u64).collect();
        let order = Self::order_of(self.n, images.iter().copied());
        Ok(LinearCharacter { subgroup: k.clone(), n: self.n, gens: k.gens().to_vec(), images, table, order })
    }

    /// `psi` restricted to `k` is trivial.
    pub fn is_trivial_on(&self, k: &Subgroup) -> bool {
        k.members().iter().all(|&x| self.table[x as usize] == 0)
    }
}

/// All linear characters of an abelian subgroup.
pub fn linear_characters(g: &PcGroup, h: &Subgroup) -> Result<Vec<LinearCharacter>> {
    if !g.is_abelian(h) {
        return Err(Error::Usage("linear_characters needs an abelian subgroup".into()));
    }
    abelianization_characters(g, h)
}

/// All linear characters of `H`, i.e. the characters of `H/H'` lifted to `H`.
pub fn abelianization_characters(g: &PcGroup, h: &Subgroup) -> Result<Vec<LinearCharacter>> {
    let basis = AbelianBasis::new(g, h);
    let n = g.exponent(&g.whole());
    let total = basis.quotient_order();
    (0..total)
        .map(|code| {
            let a = decode(code, &basis.orders);
            LinearCharacter::from_basis(g, h, &basis, n, &a)
        })
        .collect()
}

/// Mixed-radix digits of `code`.
pub fn decode(mut code: u64, radices: &[u64]) -> Vec<u64> {
    radices
        .iter()
        .map(|&o| {
            let d = code % o;
            code /= o;
            d
        })
        .collect()
}

/// A class function on a group: one value per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    group: u64,
    values: Vec<CycNumber>,
}

impl ClassFunction {
    pub fn new(g: &PcGroup, values: Vec<CycNumber>) -> Result<Self> {
        if values.len() != g.conjugacy_classes().len() {
            return Err(Error::Usage(format!(
                "{} values given for {} classes",
                values.len(),
                g.conjugacy_classes().len()
            )));
        }
        Ok(ClassFunction { group: g.id(), values })
    }

    pub fn trivial(g: &PcGroup) -> Self {
        ClassFunction { group: g.id(), values: vec![CycNumber::one(); g.conjugacy_classes().len()] }
    }

    /// The regular character.
    pub fn regular(g: &PcGroup) -> Self {
        let mut values = vec![CycNumber::zero(); g.conjugacy_classes().len()];
        values[0] = CycNumber::from_integer(g.order() as i64);
        ClassFunction { group: g.id(), values }
    }

    /// Extends a linear character of `G` itself to a class function.
    pub fn from_linear(g: &PcGroup, psi: &LinearCharacter) -> Result<Self> {
        if psi.subgroup().order() != g.order() {
            return Err(Error::Usage("linear character is not defined on the whole group".into()));
        }
        let values = g.conjugacy_classes().reps.iter().map(|&r| psi.value(r).expect("defined on G")).collect();
        Ok(ClassFunction { group: g.id(), values })
    }

    pub fn values(&self) -> &[CycNumber] {
        &self.values
    }

    pub fn group_id(&self) -> u64 {
        self.group
    }

    /// `chi(1)` as a rational number.
    pub fn degree(&self) -> Rational64 {
        self.values[0].to_rational().unwrap_or_else(Rational64::zero)
    }

    pub fn value_at(&self, g: &PcGroup, x: Elem) -> &CycNumber {
        &self.values[g.conjugacy_classes().class_of[x as usize] as usize]
    }

    /// `d` with `Q(chi) = Q(zeta_d)`.
    pub fn field_of_values(&self) -> Result<u64> {
        field_of_values(self.values.iter())
    }

    /// `{g : chi(g) = chi(1)}`.
    pub fn kernel(&self, g: &PcGroup) -> Subgroup {
        let cls = g.conjugacy_classes();
        let deg = &self.values[0];
        let members = (0..g.order() as Elem).filter(|&x| &self.values[cls.class_of[x as usize] as usize] == deg).collect();
        g.subgroup_from_members(members)
    }

    /// Values of `chi` on the members of `h`, in member order.
    pub fn restrict(&self, g: &PcGroup, h: &Subgroup) -> Vec<CycNumber> {
        h.members().iter().map(|&x| self.value_at(g, x).clone()).collect()
    }

    /// Value-wise Galois conjugate `zeta -> zeta^t`.
    pub fn conj_by(&self, t: i64) -> Result<Self> {
        let values = self.values.iter().map(|v| v.conj_by(t)).collect::<Result<_>>()?;
        Ok(ClassFunction { group: self.group, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::Usage("class functions of different groups".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(ClassFunction { group: self.group, values })
    }
}

/// `psi^G(g) = sum_t psi°(t^-1 g t)` over a left transversal of `H`.
pub fn induce(g: &PcGroup, psi: &LinearCharacter) -> Result<ClassFunction> {
    let h = psi.subgroup();
    let reps = &g.conjugacy_classes().reps;
    let n = psi.modulus();
    let transversal = g.left_transversal(h);
    let values = reps
        .iter()
        .map(|&c| {
            let mut counts = vec![0i64; n as usize];
            for &t in &transversal {
                if let Some(v) = psi.exponent_at(g.conj(c, t)) {
                    counts[v as usize] += 1;
                }
            }
            CycNumber::from_root_counts(n, &counts)
        })
        .collect::<Result<_>>()?;
    Ok(ClassFunction { group: g.id(), values })
}

/// The lift of a class function on `G/N` along the projection `G -> G/N`.
pub fn lift(g: &PcGroup, quotient: &PcGroup, projection: &[Elem], chi: &ClassFunction) -> Result<ClassFunction> {
    if chi.group != quotient.id() {
        return Err(Error::Usage("class function does not belong to the quotient".into()));
    }
    let values = g.conjugacy_classes().reps.iter().map(|&r| chi.value_at(quotient, projection[r as usize]).clone()).collect();
    Ok(ClassFunction { group: g.id(), values })
}

/// `(1/|G|) sum_g chi(g) conj(psi(g))`, which must be rational.
pub fn inner_product(g: &PcGroup, chi: &ClassFunction, psi: &ClassFunction) -> Result<Rational64> {
    if chi.group != g.id() || psi.group != g.id() {
        return Err(Error::Usage("class functions belong to different groups".into()));
    }
    let cls = g.conjugacy_classes();
    let mut n = 1u64;
    for v in chi.values.iter().chain(&psi.values) {
        let (a, b) = (n.max(v.order()), n.min(v.order()));
        if a % b != 0 {
            return Err(Error::Usage("values lie over different primes".into()));
        }
        n = a;
    }
    let mut acc = vec![Rational64::zero(); n as usize];
    for (c, &size) in cls.sizes.iter().enumerate() {
        let (a, b) = (&chi.values[c], &psi.values[c]);
        let (sa, sb) = (n / a.order(), n / b.order());
        let w = Rational64::from_integer(size as i64);
        for (i, x) in a.terms() {
            for (j, y) in b.terms() {
                let e = (i * sa + n - (j * sb) % n) % n;
                acc[e as usize] += w * x * y;
            }
        }
    }
    let terms: Vec<(i64, Rational64)> = acc.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as i64, c)).collect();
    let total = if n == 1 {
        CycNumber::from_rational(terms.first().map(|t| t.1).unwrap_or_else(Rational64::zero))
    } else {
        CycNumber::from_exponent_terms(n, &terms)?
    };
    let r = total
        .to_rational()
        .ok_or_else(|| Error::Inconsistent("inner product is not rational".into()))?;
    Ok(r / Rational64::from_integer(g.order() as i64))
}

/// Inner product of two characters, required to be a nonnegative integer.
pub fn character_inner_product(g: &PcGroup, chi: &ClassFunction, psi: &ClassFunction) -> Result<i64> {
    let r = inner_product(g, chi, psi)?;
    if !r.is_integer() || r < Rational64::zero() {
        return Err(Error::Inconsistent(format!("inner product of characters is {r}")));
    }
    Ok(r.to_integer())
}

/// A Galois orbit of an irreducible character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisOrbit {
    /// Lexicographically least conjugate.
    pub representative: ClassFunction,
    pub size: usize,
    /// `Q(chi) = Q(zeta_d)`.
    pub d: u64,
}

impl GaloisOrbit {
    pub fn degree(&self) -> Rational64 {
        self.representative.degree()
    }
}

/// The Galois orbit of `chi` under `Gal(Q(chi)/Q)`.
pub fn galois_orbit(chi: &ClassFunction) -> Result<GaloisOrbit> {
    let d = chi.field_of_values()?;
    let mut best = chi.clone();
    let mut members: Vec<ClassFunction> = vec![chi.clone()];
    if d > 1 {
        for t in 2..d {
            if t % prime_power(d).unwrap().0 == 0 {
                continue;
            }
            let c = chi.conj_by(t as i64)?;
            if c.values < best.values {
                best = c.clone();
            }
            if !members.contains(&c) {
                members.push(c);
            }
        }
    }
    Ok(GaloisOrbit { representative: best, size: members.len(), d })
}

/// `Omega(chi) = sum_sigma chi^sigma`, the character of the rational
/// representation attached to `chi` (Schur index 1 for odd `p`).
pub fn omega(chi: &ClassFunction) -> Result<ClassFunction> {
    let d = chi.field_of_values()?;
    let values = chi
        .values
        .iter()
        .map(|v| v.trace_from(d).map(CycNumber::from_rational))
        .collect::<Result<_>>()?;
    Ok(ClassFunction { group: chi.group, values })
}

/// `Omega` of `chi` as rational values, one per class.
pub fn omega_values(chi: &ClassFunction) -> Result<Vec<Rational64>> {
    let d = chi.field_of_values()?;
    chi.values.iter().map(|v| v.trace_from(d)).collect()
}

/// Checks `<Omega, Omega> = [Q(chi):Q]`, which holds exactly when the division
/// ring of the Wedderburn component is the commutative field `Q(chi)`.
pub fn check_trivial_division_ring(g: &PcGroup, chi: &ClassFunction) -> Result<()> {
    let om = omega(chi)?;
    let d = chi.field_of_values()?;
    let ip = inner_product(g, &om, &om)?;
    if ip != Rational64::from_integer(phi_prime_power(d) as i64) {
        return Err(Error::Invariant(format!("<Omega, Omega> = {ip} differs from phi({d})")));
    }
    Ok(())
}

/// `(G, N)` is a Camina pair: every `g` outside `N` is conjugate to all of `gN`.
pub fn is_camina_pair(g: &PcGroup, n: &Subgroup) -> bool {
    if n.order() == 1 || n.order() == g.order() || !g.is_normal(n) {
        return false;
    }
    let cls = g.conjugacy_classes();
    cls.reps.iter().filter(|&&r| !n.contains(r)).all(|&r| {
        let c = cls.class_of[r as usize];
        n.members().iter().all(|&m| cls.class_of[g.mul(r, m) as usize] == c)
    })
}

/// Every `g` outside `Z(G)` has conjugacy class `gG'`; for non-abelian groups this
/// is equivalent to all non-linear irreducible characters vanishing off the center.
pub fn is_vz_group(g: &PcGroup) -> bool {
    let z = g.center();
    if z.order() == g.order() {
        return false;
    }
    let d = g.derived_subgroup();
    let cls = g.conjugacy_classes();
    cls.reps.iter().enumerate().filter(|(_, &r)| !z.contains(r)).all(|(c, &r)| {
        cls.sizes[c] == d.order() && d.members().iter().all(|&m| cls.class_of[g.mul(r, m) as usize] == c as u32)
    })
}

/// Rational number helper used by reports.
pub fn rational_text(r: Rational64) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `true` when the rational is the integer one.
pub fn is_one(r: Rational64) -> bool {
    r.is_one()
}
