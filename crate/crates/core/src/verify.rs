//! The per-group verification suite shared by the command line and the tests.

use std::fmt;

use crate::catalog::{classify, GroupInstance};
use crate::character::{is_camina_pair, is_vz_group};
use crate::error::{Error, Result};
use crate::pairs::{closed_form_pairs, generic_search, orbit_keys, required_pairs, verify_pair, PairSet, Route};
use crate::rep::{all_rational_irreps, RationalRep};
use crate::wedderburn::{decompose, WedderburnReport};

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    /// Not applicable, with the reason.
    Skip(String),
}

impl Status {
    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fail(_))
    }

    fn of(r: Result<()>) -> Self {
        match r {
            Ok(()) => Status::Pass,
            Err(e) => Status::Fail(e.to_string()),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail(m) => write!(f, "fail: {m}"),
            Status::Skip(m) => write!(f, "n/a: {m}"),
        }
    }
}

/// Names of the checks, in report order.
pub const CHECKS: [&str; 7] = ["classification", "count", "pairs", "closed_form", "reps", "wedderburn", "predicates"];

/// Results for one group.
#[derive(Clone, Debug)]
pub struct GroupReport {
    pub name: String,
    pub family: u8,
    pub p: u32,
    pub checks: Vec<(&'static str, Status)>,
    pub pairs: Option<PairSet>,
    pub wedderburn: Option<WedderburnReport>,
    pub reps: Option<Vec<RationalRep>>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, s)| !s.is_fail())
    }

    pub fn status(&self, check: &str) -> Option<&Status> {
        self.checks.iter().find(|(n, _)| *n == check).map(|(_, s)| s)
    }
}

/// `(is_vz_group, is_camina_pair(G, Z))` expected for a family.
pub fn expected_predicates(family: u8) -> (bool, bool) {
    (matches!(family, 2 | 5), matches!(family, 5 | 7 | 8 | 10))
}

/// Runs every check on one group. With `keep_reps` the built representations are returned.
pub fn verify_group(inst: &GroupInstance, keep_reps: bool) -> GroupReport {
    let g = &inst.group;
    let fam = inst.family.index();
    let mut checks = Vec::new();
    checks.push((
        "classification",
        Status::of(classify(g).and_then(|f| {
            if f == inst.family {
                Ok(())
            } else {
                Err(Error::Classification(format!("classifies as {f}, declared {}", inst.family)))
            }
        })),
    ));
    let pairs = required_pairs(inst);
    let classes = g.cyclic_subgroup_classes().count();
    match &pairs {
        Ok(ps) => {
            checks.push((
                "count",
                if ps.pairs.len() == classes {
                    Status::Pass
                } else {
                    Status::Fail(format!("{} orbits for {classes} cyclic subgroup classes", ps.pairs.len()))
                },
            ));
            checks.push(("pairs", Status::of(ps.pairs.iter().try_for_each(|pr| verify_pair(g, pr).map(|_| ())))));
            let cf = match ps.route {
                Route::ClosedForm => match generic_search(g) {
                    Ok(search) if orbit_keys(&search) == orbit_keys(&ps.pairs) => Status::Pass,
                    Ok(_) => Status::Fail("closed form and search differ at the orbit level".into()),
                    Err(e) => Status::Fail(e.to_string()),
                },
                Route::Search => match closed_form_pairs(inst) {
                    Err(e) => Status::Skip(e.to_string()),
                    Ok(_) => Status::Fail("closed form available but search was used".into()),
                },
            };
            checks.push(("closed_form", cf));
        }
        Err(e) => {
            for n in ["count", "pairs", "closed_form"] {
                checks.push((n, Status::Fail(e.to_string())));
            }
        }
    }
    let (reps, wed) = match &pairs {
        Ok(ps) => {
            let reps = all_rational_irreps(g, &ps.pairs);
            let wed = decompose(inst, &ps.pairs);
            checks.push(("reps", Status::of(reps.as_ref().map(|_| ()).map_err(Clone::clone))));
            checks.push((
                "wedderburn",
                match &wed {
                    Ok(w) if w.formula.is_some() => Status::Pass,
                    Ok(w) => Status::Skip(format!("oracle only: {}", w.formula_note.clone().unwrap_or_default())),
                    Err(e) => Status::Fail(e.to_string()),
                },
            ));
            (reps.ok(), wed.ok())
        }
        Err(e) => {
            checks.push(("reps", Status::Fail(e.to_string())));
            checks.push(("wedderburn", Status::Fail(e.to_string())));
            (None, None)
        }
    };
    let (vz, camina) = expected_predicates(fam);
    let got = (is_vz_group(g), is_camina_pair(g, &g.center()));
    checks.push((
        "predicates",
        if got == (vz, camina) {
            Status::Pass
        } else {
            Status::Fail(format!("(vz, camina) = {got:?}, expected {:?}", (vz, camina)))
        },
    ));
    GroupReport {
        name: inst.name.clone(),
        family: fam,
        p: inst.p(),
        checks,
        pairs: pairs.ok(),
        wedderburn: wed,
        reps: if keep_reps { reps } else { None },
    }
}
