//! Catalog of groups of order `p^5` by isoclinic family, and the invariant-based
//! family classifier.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{binomial, gcd_u64, inv_mod, primitive_root, smallest_nonresidue};
use crate::error::{Error, Result};
use crate::format::{eval_word, PresentationText};
use crate::pc::{Elem, PcGroup, Subgroup};

/// Isoclinic family index `1..=10`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId(u8);

impl FamilyId {
    pub fn new(k: u8) -> Result<Self> {
        if (1..=10).contains(&k) {
            Ok(FamilyId(k))
        } else {
            Err(Error::Usage(format!("family index {k} outside 1..=10")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phi_{}", self.0)
    }
}

/// Where a catalog presentation comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Presentation as published in the classification.
    Printed,
    /// Found by a randomized search over consistent presentations and admitted by
    /// the classifier; used where no member of the family is printed.
    Supplementary,
}

/// A catalog entry: a named presentation template over the prime `p`.
#[derive(Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub family: FamilyId,
    pub source: Source,
    /// Smallest admissible prime.
    pub min_p: u32,
    param: u64,
    admissible: fn(u32, u64) -> bool,
    body: fn(u32, u64) -> String,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry").field("name", &self.name).field("family", &self.family).finish()
    }
}

impl CatalogEntry {
    pub fn is_admissible(&self, p: u32) -> bool {
        p >= self.min_p && (self.admissible)(p, self.param)
    }

    /// The presentation text at the prime `p`.
    pub fn text(&self, p: u32) -> Result<String> {
        if !self.is_admissible(p) {
            return Err(Error::Parameter(format!("{} is not defined for p = {p}", self.name)));
        }
        if self.source == Source::Supplementary {
            return Ok(self.body_text(p));
        }
        Ok(format!(
            "name {}\nfamily {}\np {p}\ngens 5\n{}",
            self.name,
            self.family.0,
            (self.body)(p, self.param)
        ))
    }

    fn body_text(&self, p: u32) -> String {
        (self.body)(p, self.param)
    }
}

/// An instantiated catalog or ingested group with its named subgroups and elements.
#[derive(Clone, Debug)]
pub struct GroupInstance {
    pub name: String,
    pub family: FamilyId,
    pub source: Source,
    pub group: PcGroup,
    pub text: PresentationText,
    subgroups: BTreeMap<String, Subgroup>,
    elements: BTreeMap<String, Elem>,
}

impl GroupInstance {
    pub fn p(&self) -> u32 {
        self.group.p()
    }

    pub fn subgroup(&self, name: &str) -> Result<&Subgroup> {
        self.subgroups
            .get(name)
            .ok_or_else(|| Error::CatalogData(format!("{} declares no subgroup {name}", self.name)))
    }

    pub fn element(&self, name: &str) -> Result<Elem> {
        self.elements
            .get(name)
            .copied()
            .ok_or_else(|| Error::CatalogData(format!("{} declares no element {name}", self.name)))
    }

    pub fn has_subgroup(&self, name: &str) -> bool {
        self.subgroups.contains_key(name)
    }

    pub fn subgroup_names(&self) -> impl Iterator<Item = &str> {
        self.subgroups.keys().map(String::as_str)
    }
}

fn any_p(_: u32, _: u64) -> bool {
    true
}

fn b3(p: u32) -> u64 {
    binomial(p as u64, 3) % p as u64
}

fn phi2_311a(_: u32, _: u64) -> String {
    "power 1 = g4\npower 4 = g5\ncommutator 2 1 = g5\n\
     subgroup Z = g4, g3\nsubgroup D = g5\nsubgroup H = g4, g2, g3\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement alpha2 = g5\n"
        .into()
}

fn phi2_221a(_: u32, _: u64) -> String {
    "power 1 = g5\npower 2 = g4\ncommutator 2 1 = g5\n\
     subgroup Z = g5, g4, g3\nsubgroup D = g5\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement alpha2 = g5\n"
        .into()
}

fn phi2_221b(_: u32, _: u64) -> String {
    "power 1 = g5\npower 3 = g4\ncommutator 2 1 = g5\n\
     subgroup Z = g5, g3\nsubgroup D = g5\nsubgroup H = g5, g2, g3\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement alpha2 = g5\n"
        .into()
}

fn phi2_2111a(_: u32, _: u64) -> String {
    "power 1 = g5\ncommutator 2 1 = g5\n\
     subgroup Z = g5, g3, g4\nsubgroup D = g5\nsubgroup H = g5, g2, g3, g4\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement delta = g4\nelement alpha2 = g5\n"
        .into()
}

fn phi2_2111b(_: u32, _: u64) -> String {
    "power 3 = g5\ncommutator 2 1 = g5\n\
     subgroup Z = g3, g4\nsubgroup D = g5\nsubgroup H = g1, g3, g4\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement delta = g4\nelement alpha2 = g5\n"
        .into()
}

fn phi2_2111c(_: u32, _: u64) -> String {
    "power 1 = g4\ncommutator 2 1 = g5\n\
     subgroup Z = g4, g5, g3\nsubgroup D = g5\nsubgroup H = g4, g2, g5, g3\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement alpha2 = g5\n"
        .into()
}

fn phi2_2111d(_: u32, _: u64) -> String {
    "power 3 = g4\ncommutator 2 1 = g5\n\
     subgroup Z = g5, g3\nsubgroup D = g5\nsubgroup H = g2, g5, g3\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement alpha2 = g5\n"
        .into()
}

fn phi2_15(_: u32, _: u64) -> String {
    "commutator 2 1 = g5\n\
     subgroup Z = g5, g3, g4\nsubgroup D = g5\nsubgroup H = g2, g5, g3, g4\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement delta = g4\nelement alpha2 = g5\n"
        .into()
}

fn phi2_41(_: u32, _: u64) -> String {
    "power 1 = g3\npower 3 = g4\npower 4 = g5\ncommutator 2 1 = g5\n\
     subgroup Z = g3\nsubgroup D = g5\nsubgroup H = g3, g2\n\
     element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g5\n"
        .into()
}

fn phi2_32a1(_: u32, _: u64) -> String {
    "power 1 = g3\npower 2 = g4\npower 3 = g5\ncommutator 2 1 = g5\n\
     subgroup Z = g3, g4\nsubgroup D = g5\nsubgroup H = g3, g2\n\
     element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g5\n"
        .into()
}

fn phi2_311b(_: u32, _: u64) -> String {
    "power 3 = g4\npower 4 = g5\ncommutator 2 1 = g5\n\
     subgroup Z = g3\nsubgroup D = g5\nsubgroup H = g1, g3\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement alpha2 = g5\n"
        .into()
}

fn phi2_311c(_: u32, _: u64) -> String {
    "power 1 = g3\npower 3 = g4\ncommutator 2 1 = g5\n\
     subgroup Z = g3, g5\nsubgroup D = g5\nsubgroup H = g3, g2, g5\n\
     element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g5\n"
        .into()
}

fn phi2_221c(_: u32, _: u64) -> String {
    "power 1 = g4\npower 3 = g5\ncommutator 2 1 = g5\n\
     subgroup Z = g4, g3\nsubgroup D = g5\nsubgroup H = g4, g2, g3\n\
     element alpha = g1\nelement alpha1 = g2\nelement gamma = g3\nelement alpha2 = g5\n"
        .into()
}

fn phi2_32a2(_: u32, _: u64) -> String {
    "power 1 = g3\npower 2 = g5\npower 3 = g4\ncommutator 2 1 = g5\n\
     subgroup Z = g3, g5\nsubgroup D = g5\n\
     element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g5\n"
        .into()
}

fn phi2_221d(_: u32, _: u64) -> String {
    "power 1 = g3\npower 2 = g4\ncommutator 2 1 = g5\n\
     subgroup Z = g3, g4, g5\nsubgroup D = g5\n\
     element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g5\n"
        .into()
}

fn phi4_15(_: u32, _: u64) -> String {
    "commutator 2 1 = g4\ncommutator 3 1 = g5\n\
     subgroup Z = g4, g5\nsubgroup D = g4, g5\n\
     element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g3\nelement beta1 = g4\nelement beta2 = g5\n"
        .into()
}

fn phi5(p: u32, with_power: u64) -> String {
    let q = p - 1;
    let (power, h) = if with_power == 1 { ("power 1 = g5\n", "g5, g2, g3") } else { ("", "g1, g3, g5") };
    format!(
        "{power}commutator 2 1 = g5^{q}\ncommutator 4 3 = g5^{q}\n\
         subgroup Z = g5\nsubgroup D = g5\nsubgroup H = {h}\n\
         element alpha1 = g1\nelement alpha2 = g2\nelement alpha3 = g3\nelement alpha4 = g4\nelement beta = g5\n"
    )
}

/// `r = 1` for parameter 0 and `r = nu` (least non-residue) for parameter 1.
fn r_of(p: u32, param: u64) -> u64 {
    if param == 0 {
        1
    } else {
        smallest_nonresidue(p as u64)
    }
}

fn phi3_311b(p: u32, param: u64) -> String {
    let s = inv_mod(r_of(p, param), p as u64);
    format!(
        "power 2 = g4\npower 4 = g5\ncommutator 2 1 = g3\ncommutator 3 1 = g5^{s}\n\
         subgroup Z = g4\nsubgroup D = g3, g5\nsubgroup C = g2, g3\n\
         element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g3\nelement alpha3 = g5\n"
    )
}

fn phi3_221a(_: u32, with_power: u64) -> String {
    let power = if with_power == 1 { "power 1 = g5\n" } else { "" };
    format!(
        "{power}power 2 = g4\ncommutator 2 1 = g3\ncommutator 3 1 = g5\n\
         subgroup Z = g4, g5\nsubgroup D = g3, g5\nsubgroup C = g2, g3, g5\n\
         element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g3\nelement alpha3 = g5\n"
    )
}

fn phi3_15(_: u32, _: u64) -> String {
    "commutator 2 1 = g3\ncommutator 3 1 = g4\n\
     subgroup Z = g4, g5\nsubgroup D = g3, g4\nsubgroup C = g2, g3, g4, g5\n\
     element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g3\nelement alpha3 = g4\nelement alpha4 = g5\n"
        .into()
}

fn phi9_r_admissible(p: u32, r: u64) -> bool {
    r <= gcd_u64(p as u64 - 1, 3)
}

fn phi9_2111b(p: u32, r: u64) -> String {
    let k = crate::arith::pow_mod(primitive_root(p as u64), r, p as u64);
    format!(
        "power 2 = g5^{k}\ncommutator 2 1 = g3\ncommutator 3 1 = g4\ncommutator 4 1 = g5\n\
         subgroup Z = g5\nsubgroup D = g3, g4, g5\nsubgroup C = g2, g3, g4, g5\n\
         element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g3\nelement alpha3 = g4\nelement alpha4 = g5\n"
    )
}

fn phi7_common(p: u32) -> String {
    format!(
        "commutator 2 1 = g3\ncommutator 3 1 = g5\ncommutator 4 2 = g5^{}\n\
         subgroup Z = g5\nsubgroup D = g3, g5\n\
         element alpha = g1\nelement alpha1 = g2\nelement alpha2 = g3\nelement beta = g4\nelement alpha3 = g5\n",
        p - 1
    )
}

fn phi7_2111a(p: u32, _: u64) -> String {
    let e = (p as u64 - b3(p)) % p as u64;
    format!("power 1 = g5\npower 2 = g5^{e}\n{}subgroup H = g3, g5, g4\n", phi7_common(p))
}

fn phi7_2111b(p: u32, param: u64) -> String {
    let e = (r_of(p, param) + p as u64 - b3(p)) % p as u64;
    format!("power 2 = g5^{e}\n{}subgroup H = g3, g5, g4\n", phi7_common(p))
}

fn phi7_2111c(p: u32, _: u64) -> String {
    let e = (p as u64 - b3(p)) % p as u64;
    let h = if p == 3 { "g4^-2*g2, g3, g5" } else { "g2, g3, g5" };
    format!("power 2 = g5^{e}\npower 4 = g5\n{}subgroup H = {h}\n", phi7_common(p))
}

fn phi7_15(p: u32, _: u64) -> String {
    let e = (p as u64 - b3(p)) % p as u64;
    format!("power 2 = g5^{e}\n{}subgroup H = g3, g5, g4\n", phi7_common(p))
}

fn phi8_32(p: u32, _: u64) -> String {
    let q = p - 1;
    format!(
        "power 1 = g3\npower 2 = g4\npower 3 = g5\n\
         commutator 2 1 = g3^{q}*g5^{q}\ncommutator 3 2 = g5\ncommutator 4 1 = g5^{q}\n\
         subgroup Z = g5\nsubgroup D = g3, g5\nsubgroup H = g5, g2\n\
         element alpha1 = g1\nelement alpha2 = g2\n"
    )
}

/// Abelian group of type `lambda`, encoded as the digits of the parameter.
fn abelian(_: u32, code: u64) -> String {
    let parts: Vec<usize> = code.to_string().chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
    let mut s = String::new();
    let mut k = 1;
    for &part in &parts {
        for j in 0..part - 1 {
            s.push_str(&format!("power {} = g{}\n", k + j, k + j + 1));
        }
        k += part;
    }
    s.push_str("subgroup Z = g1, g2, g3, g4, g5\nsubgroup D =\n");
    s
}

const PHI6_P3: &str = include_str!("../../../presentations/phi6_p3.txt");
const PHI6_P5: &str = include_str!("../../../presentations/phi6_p5.txt");
const PHI10_P3: &str = include_str!("../../../presentations/phi10_p3.txt");
const PHI10_P5: &str = include_str!("../../../presentations/phi10_p5.txt");

fn supplementary_admissible(p: u32, _: u64) -> bool {
    p == 3 || p == 5
}

fn phi6_file(p: u32, _: u64) -> String {
    if p == 3 { PHI6_P3 } else { PHI6_P5 }.into()
}

fn phi10_file(p: u32, _: u64) -> String {
    if p == 3 { PHI10_P3 } else { PHI10_P5 }.into()
}

macro_rules! entry {
    ($name:expr, $fam:expr, $min:expr, $body:expr) => {
        entry!($name, $fam, $min, $body, 0, any_p, Source::Printed)
    };
    ($name:expr, $fam:expr, $min:expr, $body:expr, $param:expr) => {
        entry!($name, $fam, $min, $body, $param, any_p, Source::Printed)
    };
    ($name:expr, $fam:expr, $min:expr, $body:expr, $param:expr, $adm:expr, $src:expr) => {
        CatalogEntry {
            name: $name,
            family: FamilyId($fam),
            source: $src,
            min_p: $min,
            param: $param,
            admissible: $adm,
            body: $body,
        }
    };
}

static CATALOG: &[CatalogEntry] = &[
    entry!("Phi_1(5)", 1, 3, abelian, 5),
    entry!("Phi_1(41)", 1, 3, abelian, 41),
    entry!("Phi_1(32)", 1, 3, abelian, 32),
    entry!("Phi_1(311)", 1, 3, abelian, 311),
    entry!("Phi_1(221)", 1, 3, abelian, 221),
    entry!("Phi_1(2111)", 1, 3, abelian, 2111),
    entry!("Phi_1(1^5)", 1, 3, abelian, 11111),
    entry!("Phi_2(311)a", 2, 3, phi2_311a),
    entry!("Phi_2(221)a", 2, 3, phi2_221a),
    entry!("Phi_2(221)b", 2, 3, phi2_221b),
    entry!("Phi_2(2111)a", 2, 3, phi2_2111a),
    entry!("Phi_2(2111)b", 2, 3, phi2_2111b),
    entry!("Phi_2(2111)c", 2, 3, phi2_2111c),
    entry!("Phi_2(2111)d", 2, 3, phi2_2111d),
    entry!("Phi_2(1^5)", 2, 3, phi2_15),
    entry!("Phi_2(41)", 2, 3, phi2_41),
    entry!("Phi_2(32)a_1", 2, 3, phi2_32a1),
    entry!("Phi_2(311)b", 2, 3, phi2_311b),
    entry!("Phi_2(311)c", 2, 3, phi2_311c),
    entry!("Phi_2(221)c", 2, 3, phi2_221c),
    entry!("Phi_2(32)a_2", 2, 3, phi2_32a2),
    entry!("Phi_2(221)d", 2, 3, phi2_221d),
    entry!("Phi_3(311)b_1", 3, 5, phi3_311b, 0),
    entry!("Phi_3(311)b_nu", 3, 5, phi3_311b, 1),
    entry!("Phi_3(221)a", 3, 5, phi3_221a, 1),
    entry!("Phi_3(2111)e", 3, 5, phi3_221a, 0),
    entry!("Phi_3(1^5)", 3, 5, phi3_15),
    entry!("Phi_4(1^5)", 4, 3, phi4_15),
    entry!("Phi_5(2111)", 5, 3, phi5, 1),
    entry!("Phi_5(1^5)", 5, 3, phi5, 0),
    entry!("Phi_6(search)", 6, 3, phi6_file, 0, supplementary_admissible, Source::Supplementary),
    entry!("Phi_7(2111)a", 7, 3, phi7_2111a),
    entry!("Phi_7(2111)b_1", 7, 3, phi7_2111b, 0),
    entry!("Phi_7(2111)b_nu", 7, 3, phi7_2111b, 1),
    entry!("Phi_7(2111)c", 7, 3, phi7_2111c),
    entry!("Phi_7(1^5)", 7, 3, phi7_15),
    entry!("Phi_8(32)", 8, 3, phi8_32),
    entry!("Phi_9(2111)b_1", 9, 5, phi9_2111b, 1, phi9_r_admissible, Source::Printed),
    entry!("Phi_9(2111)b_2", 9, 5, phi9_2111b, 2, phi9_r_admissible, Source::Printed),
    entry!("Phi_9(2111)b_3", 9, 5, phi9_2111b, 3, phi9_r_admissible, Source::Printed),
    entry!("Phi_10(search)", 10, 3, phi10_file, 0, supplementary_admissible, Source::Supplementary),
];

/// Every catalog entry.
pub fn entries() -> &'static [CatalogEntry] {
    CATALOG
}

/// Entries admissible at `p`.
pub fn entries_for(p: u32) -> Vec<&'static CatalogEntry> {
    CATALOG.iter().filter(|e| e.is_admissible(p)).collect()
}

pub fn entry(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Usage(format!("no catalog entry named {name:?}")))
}

/// Builds the group `name` at `p` and checks its declared subgroups and family.
pub fn instantiate(name: &str, p: u32) -> Result<GroupInstance> {
    let e = entry(name)?;
    let text = PresentationText::parse(&e.text(p)?)?;
    if text.presentation.p() != p {
        return Err(Error::CatalogData(format!("{name} file is for p = {}", text.presentation.p())));
    }
    let inst = build(text, e.source).map_err(|err| match err {
        Error::Presentation(m) | Error::Classification(m) => Error::CatalogData(format!("{name} at p = {p}: {m}")),
        other => other,
    })?;
    if inst.family != e.family {
        return Err(Error::CatalogData(format!("{name} classifies as {} instead of {}", inst.family, e.family)));
    }
    Ok(inst)
}

/// Validates an arbitrary presentation: consistency, order `p^5`, declared
/// subgroups, and classification.
pub fn ingest(text: &str) -> Result<GroupInstance> {
    let text = PresentationText::parse(text)?;
    build(text, Source::Supplementary)
}

fn build(text: PresentationText, source: Source) -> Result<GroupInstance> {
    let group = PcGroup::new(text.presentation.clone())?;
    let p = group.p() as usize;
    if group.order() != p.pow(5) {
        return Err(Error::Classification(format!("order {} is not p^5", group.order())));
    }
    let mut subgroups = BTreeMap::new();
    for (nm, words) in &text.subgroups {
        let gens = words.iter().map(|w| eval_word(&group, w)).collect::<Result<Vec<_>>>()?;
        subgroups.insert(nm.clone(), group.closure(&gens));
    }
    let mut elements = BTreeMap::new();
    for (nm, w) in &text.elements {
        elements.insert(nm.clone(), eval_word(&group, w)?);
    }
    let z = group.center();
    let d = group.derived_subgroup();
    let checks: [(&str, Subgroup); 3] = [("Z", z), ("D", d.clone()), ("C", group.centralizer(&d))];
    for (nm, actual) in checks {
        if let Some(declared) = subgroups.get(nm) {
            if declared != &actual {
                return Err(Error::Presentation(format!(
                    "declared subgroup {nm} has order {} but the computed one has order {}",
                    declared.order(),
                    actual.order()
                )));
            }
        }
    }
    let family = classify(&group)?;
    if let Some(f) = text.family {
        if f != family.0 {
            return Err(Error::Classification(format!("declared family Phi_{f} but invariants give {family}")));
        }
    }
    Ok(GroupInstance { name: text.name.clone(), family, source, group, text, subgroups, elements })
}

/// Isomorphism invariant separating parameter variants: for `e = 1, 2` and
/// `j = 1..p-1`, the number of pairs `(x, y)` with `1 != y^(p^e) = [[y, x], x]^j`.
pub fn residue_fingerprint(g: &PcGroup) -> Vec<u64> {
    use rayon::prelude::*;
    let p = g.p() as i64;
    let n = g.order() as Elem;
    let targets: Vec<[Elem; 2]> = (0..n).map(|y| [g.pow(y, p), g.pow(y, p * p)]).collect();
    (0..n)
        .into_par_iter()
        .map(|x| {
            let mut counts = vec![0u64; 2 * (p as usize - 1)];
            for y in 0..n {
                let t = targets[y as usize];
                if t == [0, 0] {
                    continue;
                }
                let c = g.comm(g.comm(y, x), x);
                let mut cj = c;
                for j in 1..p as usize {
                    for (e, &te) in t.iter().enumerate() {
                        if te != 0 && cj == te {
                            counts[e * (p as usize - 1) + j - 1] += 1;
                        }
                    }
                    cj = g.mul(cj, c);
                }
            }
            counts
        })
        .reduce(|| vec![0u64; 2 * (p as usize - 1)], |a, b| a.iter().zip(&b).map(|(u, v)| u + v).collect())
}

/// Family of a group of order `p^5` from `|Z|`, `|G'|`, `G' <= Z`, `cd(G)` and `exp(G/Z)`.
pub fn classify(g: &PcGroup) -> Result<FamilyId> {
    let p = g.p() as usize;
    if g.order() != p.pow(5) {
        return Err(Error::Classification(format!("order {} is not p^5", g.order())));
    }
    let whole = g.whole();
    if g.is_abelian(&whole) {
        return Ok(FamilyId(1));
    }
    let z = g.center();
    let d = g.derived_subgroup();
    let (zo, dox) = (z.order(), d.order());
    let cd: Vec<u64> = g.char_degree_counts()?.keys().copied().collect();
    let (p1, p2) = (p as u64, (p * p) as u64);
    let inside = d.is_subgroup_of(&z);
    let f = if dox == p && zo == p * p * p {
        2
    } else if zo == p && dox == p && cd == [1, p2] {
        5
    } else if z == d && zo == p * p {
        4
    } else if zo == p * p && dox == p * p * p {
        6
    } else if zo == p * p && dox == p * p && !inside {
        3
    } else if zo == p && dox == p * p * p && cd == [1, p1] {
        9
    } else if cd == [1, p1, p2] && dox == p * p {
        match g.exponent_mod(&whole, &z) {
            e if e == p1 => 7,
            e if e == p2 => 8,
            e => return Err(Error::Classification(format!("exponent {e} of G/Z fits neither Phi_7 nor Phi_8"))),
        }
    } else if cd == [1, p1, p2] && dox == p * p * p {
        10
    } else {
        return Err(Error::Classification(format!(
            "no family matches |Z| = {zo}, |G'| = {dox}, cd = {cd:?}"
        )));
    };
    Ok(FamilyId(f))
}
