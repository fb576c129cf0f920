//! Acceptance run: one pass/fail line per criterion. All tolerances are exact.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use ratrep_core::arith::phi_prime_power;
use ratrep_core::catalog::{entries_for, instantiate, GroupInstance};
use ratrep_core::character::{is_camina_pair, is_vz_group, LinearCharacter};
use ratrep_core::pairs::{generic_search, orbit_keys, verify_pair, Inducer, Route};
use ratrep_core::pc::{Elem, PcGroup, PcPresentation};
use ratrep_core::rep::{
    build_rep, companion_matrix, companion_power, integrality_check, rep_character, verify_relations, RationalMatrix,
};
use ratrep_core::verify::{verify_group, GroupReport};
use ratrep_core::wedderburn::{oracle_decomposition, perlis_walker, Component, Decomposition};

const PRIMES: [u32; 2] = [3, 5];

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn check(cond: bool, good: String, bad: String) -> Outcome {
    if cond {
        pass(good)
    } else {
        fail(bad)
    }
}

struct Run {
    p: u32,
    groups: Vec<GroupInstance>,
    reports: Vec<GroupReport>,
    elapsed: Duration,
}

fn run_suite(p: u32) -> Run {
    let groups: Vec<GroupInstance> = entries_for(p)
        .par_iter()
        .map(|e| instantiate(e.name, p).unwrap_or_else(|err| panic!("{} at p = {p}: {err}", e.name)))
        .collect();
    let t = Instant::now();
    let reports: Vec<GroupReport> = groups.par_iter().map(|inst| verify_group(inst, true)).collect();
    Run { p, groups, reports, elapsed: t.elapsed() }
}

/// Conjugacy classes of cyclic subgroups, counted by union-find over conjugation by generators.
fn cyclic_class_count_oracle(g: &PcGroup) -> usize {
    let n = g.order() as Elem;
    let mut key_of: BTreeMap<Vec<Elem>, usize> = BTreeMap::new();
    let mut subgroups: Vec<Vec<Elem>> = Vec::new();
    let cyclic = |x: Elem| {
        let mut m = vec![0];
        let mut y = x;
        while y != 0 {
            m.push(y);
            y = g.mul(y, x);
        }
        m.sort_unstable();
        m
    };
    for x in 0..n {
        let c = cyclic(x);
        if !key_of.contains_key(&c) {
            key_of.insert(c.clone(), subgroups.len());
            subgroups.push(c);
        }
    }
    let mut parent: Vec<usize> = (0..subgroups.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for (i, s) in subgroups.iter().enumerate() {
        for k in 0..g.ngens() {
            let t = g.gen(k);
            let mut img: Vec<Elem> = s.iter().map(|&x| g.conj(x, t)).collect();
            img.sort_unstable();
            let j = key_of[&img];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    (0..subgroups.len()).filter(|&i| find(&mut parent, i) == i).count()
}

fn criterion1(runs: &[Run]) -> Outcome {
    let mut detail = Vec::new();
    for run in runs {
        let p = run.p as usize;
        for inst in &run.groups {
            let g = &inst.group;
            if g.order() != p.pow(5) {
                return fail(format!("{} has order {}", inst.name, g.order()));
            }
            for (nm, actual) in [("Z", g.center()), ("D", g.derived_subgroup())] {
                match inst.subgroup(nm) {
                    Ok(s) if *s == actual => {}
                    Ok(_) => return fail(format!("{} declared {nm} differs", inst.name)),
                    Err(_) => return fail(format!("{} lacks declared {nm}", inst.name)),
                }
            }
        }
        detail.push(format!("{} entries at p = {}", run.groups.len(), run.p));
    }
    pass(detail.join(", "))
}

fn criterion2(runs: &[Run]) -> Outcome {
    let mut total = 0;
    for run in runs {
        for (inst, rep) in run.groups.iter().zip(&run.reports) {
            let built = rep.reps.as_ref().map(Vec::len);
            let oracle = cyclic_class_count_oracle(&inst.group);
            if built != Some(oracle) {
                return fail(format!("{} at p = {}: {built:?} representations, {oracle} classes", inst.name, run.p));
            }
            total += 1;
        }
    }
    pass(format!("{total} groups: representation count = cyclic subgroup classes"))
}

fn criterion3(runs: &[Run]) -> Outcome {
    let mut pairs = 0;
    let mut agreed = Vec::new();
    let mut search_only = Vec::new();
    for run in runs {
        let mut n = 0;
        for (inst, rep) in run.groups.iter().zip(&run.reports) {
            let g = &inst.group;
            let Some(ps) = &rep.pairs else { return fail(format!("{}: no pairs", inst.name)) };
            for pr in &ps.pairs {
                let chi = match verify_pair(g, pr) {
                    Ok(c) => c,
                    Err(e) => return fail(format!("{} at p = {}: {e}", inst.name, run.p)),
                };
                if chi.degree() != num_rational::Rational64::from_integer((g.order() / pr.subgroup.order()) as i64) {
                    return fail(format!("{}: [G:H] differs from chi(1)", inst.name));
                }
                pairs += 1;
            }
            match ps.route {
                Route::ClosedForm => {
                    let search = generic_search(g).unwrap();
                    if orbit_keys(&search) != orbit_keys(&ps.pairs) {
                        return fail(format!("{} at p = {}: closed form differs from search", inst.name, run.p));
                    }
                    n += 1;
                }
                Route::Search => search_only.push(format!("{} at p = {}", inst.name, run.p)),
            }
        }
        agreed.push(format!("{n} at p = {}", run.p));
    }
    pass(format!(
        "{pairs} pairs valid; closed form = search for {}; search only: {}",
        agreed.join(", "),
        if search_only.is_empty() { "none".into() } else { search_only.join(", ") }
    ))
}

fn criterion4(runs: &[Run]) -> Outcome {
    let mut count = 0;
    for run in runs {
        for (inst, rep) in run.groups.iter().zip(&run.reports) {
            let g = &inst.group;
            let (Some(reps), Some(ps)) = (&rep.reps, &rep.pairs) else {
                return fail(format!("{} at p = {}: {:?}", inst.name, run.p, rep.status("reps")));
            };
            for (r, pr) in reps.iter().zip(&ps.pairs) {
                if let Err(e) = verify_relations(g, r) {
                    return fail(format!("{}: {e}", inst.name));
                }
                if r.degree as u64 != pr.degree * phi_prime_power(pr.d) || !integrality_check(r) {
                    return fail(format!("{}: degree or integrality", inst.name));
                }
                let traces = rep_character(g, r);
                if traces.iter().map(|t| t.to_integer()).collect::<Vec<_>>() != pr.key
                    || traces.iter().any(|t| !t.is_integer())
                {
                    return fail(format!("{}: trace differs from Omega(chi)", inst.name));
                }
                count += 1;
            }
        }
    }
    pass(format!("{count} representations: relations, degree, integrality, trace = Omega(chi)"))
}

fn blocks(m: &RationalMatrix, size: usize) -> Vec<Vec<Option<RationalMatrix>>> {
    let k = m.dim() / size;
    (0..k).map(|i| (0..k).map(|j| Some(m.block(i, j, size)).filter(|b| !b.is_zero())).collect()).collect()
}

fn example_phi3() -> Result<String, String> {
    let inst = instantiate("Phi_3(1^5)", 5).map_err(|e| e.to_string())?;
    let g = &inst.group;
    let el = |n: &str| inst.element(n).unwrap();
    let n = g.exponent(&g.whole());
    let gens = [el("alpha1"), el("alpha2"), el("alpha3"), el("alpha4")];
    let psi = LinearCharacter::from_images(g, n, &gens, &[0, n / 5, 0, 0]).map_err(|e| e.to_string())?;
    let pair = Inducer::new(g, psi.subgroup()).try_pair(&psi).ok_or("not a required pair")?;
    let rep = build_rep(g, &pair).map_err(|e| e.to_string())?;
    if rep.degree != 20 {
        return Err(format!("degree {}", rep.degree));
    }
    let id = RationalMatrix::identity(4);
    let a = blocks(&rep.image_of(g, el("alpha")), 4);
    let a1 = blocks(&rep.image_of(g, el("alpha1")), 4);
    let a2 = blocks(&rep.image_of(g, el("alpha2")), 4);
    for i in 0..5 {
        for j in 0..5 {
            let cyc_ok = if i == (j + 1) % 5 { a[i][j].as_ref() == Some(&id) } else { a[i][j].is_none() };
            let diag_ok = if i == j {
                a2[i][j].as_ref() == Some(&companion_matrix(5))
                    && a1[i][j].as_ref() == Some(&companion_power(5, i as u64))
            } else {
                a1[i][j].is_none() && a2[i][j].is_none()
            };
            if !cyc_ok || !diag_ok {
                return Err(format!("block ({i}, {j})"));
            }
        }
    }
    if !rep.image_of(g, el("alpha3")).is_identity() || !rep.image_of(g, el("alpha4")).is_identity() {
        return Err("alpha3 or alpha4 image is not the identity".into());
    }
    Ok("Phi_3(1^5) p = 5: degree 20, alpha block-cyclic with identity blocks, alpha3 = alpha4 = I".into())
}

fn example_phi8() -> Result<String, String> {
    let inst = instantiate("Phi_8(32)", 3).map_err(|e| e.to_string())?;
    let g = &inst.group;
    let a1 = inst.element("alpha1").unwrap();
    let a2 = inst.element("alpha2").unwrap();
    let n = g.exponent(&g.whole());
    let psi = LinearCharacter::from_images(g, n, &[g.pow(a1, 9), a2], &[n / 3, 0]).map_err(|e| e.to_string())?;
    let pair = Inducer::new(g, psi.subgroup()).try_pair(&psi).ok_or("not a required pair")?;
    let rep = build_rep(g, &pair).map_err(|e| e.to_string())?;
    if rep.degree != 18 {
        return Err(format!("degree {}", rep.degree));
    }
    let id = RationalMatrix::identity(2);
    let b1 = blocks(&rep.image_of(g, a1), 2);
    for i in 0..9 {
        for j in 0..9 {
            let ok = match (i, j) {
                (0, 8) => b1[i][j].as_ref() == Some(&companion_matrix(3)),
                _ if i == j + 1 => b1[i][j].as_ref() == Some(&id),
                _ => b1[i][j].is_none(),
            };
            if !ok {
                return Err(format!("alpha1 block ({i}, {j})"));
            }
        }
    }
    let powers: Vec<RationalMatrix> = (0..3).map(|k| companion_power(3, k)).collect();
    let b2 = blocks(&rep.image_of(g, a2), 2);
    let monomial = b2.iter().all(|row| {
        let nz: Vec<_> = row.iter().flatten().collect();
        nz.len() == 1 && powers.contains(nz[0])
    });
    if !monomial {
        return Err("alpha2 image is not block-monomial in powers of P".into());
    }
    Ok("Phi_8(32) p = 3: degree 18, alpha1 block-cyclic with P in the corner, alpha2 block-monomial in powers of P".into())
}

fn criterion5() -> Outcome {
    match (example_phi3(), example_phi8()) {
        (Ok(a), Ok(b)) => pass(format!("{a}; {b}")),
        (Err(e), _) => fail(format!("Phi_3(1^5): {e}")),
        (_, Err(e)) => fail(format!("Phi_8(32): {e}")),
    }
}

fn dec(items: &[(u64, u64, u64)]) -> Decomposition {
    Decomposition::from_components(items.iter().map(|&(n, d, m)| (Component::new(n, d), m)))
}

fn criterion6(runs: &[Run]) -> Outcome {
    let mut total = 0;
    let mut by_name: BTreeMap<(String, u32), Decomposition> = BTreeMap::new();
    for run in runs {
        for (inst, rep) in run.groups.iter().zip(&run.reports) {
            let Some(w) = &rep.wedderburn else { return fail(format!("{}: {:?}", inst.name, rep.status("wedderburn"))) };
            let Some(f) = &w.formula else {
                return fail(format!("{} at p = {}: no formula ({:?})", inst.name, run.p, w.formula_note));
            };
            if *f != w.oracle || f.dimension() != inst.group.order() as u64 {
                return fail(format!("{} at p = {}: formula {f} vs oracle {}", inst.name, run.p, w.oracle));
            }
            by_name.insert((inst.name.clone(), run.p), f.clone());
            total += 1;
        }
    }
    let get = |n: &str, p: u32| by_name.get(&(n.to_string(), p)).cloned().unwrap_or_default();
    let case2 = dec(&[(1, 1, 1), (1, 5, 6), (1, 25, 5), (5, 5, 5), (5, 125, 1)]);
    let case3 = dec(&[(1, 1, 1), (1, 5, 6), (1, 25, 5), (5, 5, 10), (5, 25, 4)]);
    let terms = |d: &Decomposition| d.components().map(|(c, m)| c.dimension() * m).collect::<Vec<_>>();
    if get("Phi_3(311)b_1", 5) != case2 || terms(&case2) != [1, 24, 100, 500, 2500] {
        return fail(format!("Phi_3(311)b_1 p = 5: {}", get("Phi_3(311)b_1", 5)));
    }
    if get("Phi_3(221)a", 5) != case3 || terms(&case3) != [1, 24, 100, 1000, 2000] {
        return fail(format!("Phi_3(221)a p = 5: {}", get("Phi_3(221)a", 5)));
    }
    for name in ["Phi_7(1^5)", "Phi_8(32)"] {
        let d = get(name, 3);
        if d.matrix_part() != dec(&[(3, 3, 3), (9, 3, 1)]) {
            return fail(format!("{name} p = 3: {d}"));
        }
    }
    if get("Phi_10(search)", 3).matrix_part() != dec(&[(3, 3, 1), (3, 9, 1), (9, 3, 1)]) {
        return fail(format!("Phi_10 p = 3: {}", get("Phi_10(search)", 3)));
    }
    pass(format!("{total} groups: formula = oracle, sum n^2 phi(d) = p^5; printed multisets match"))
}

fn abelian(p: u32, parts: &[usize]) -> PcGroup {
    let n: usize = parts.iter().sum();
    let mut pr = PcPresentation::new(p, n).unwrap();
    let mut k = 0;
    for &part in parts {
        for j in 0..part - 1 {
            let mut w = vec![0; n];
            w[k + j + 1] = 1;
            pr.set_power(k + j, &w).unwrap();
        }
        k += part;
    }
    PcGroup::new(pr).unwrap()
}

fn criterion7() -> Outcome {
    let partitions: [&[usize]; 7] = [&[5], &[4, 1], &[3, 2], &[3, 1, 1], &[2, 2, 1], &[2, 1, 1, 1], &[1, 1, 1, 1, 1]];
    for parts in partitions {
        let g = abelian(3, parts);
        let formula = perlis_walker(&g).unwrap();
        let pairs = generic_search(&g).unwrap();
        let oracle = oracle_decomposition(&g, &pairs).unwrap();
        let mut by_order: BTreeMap<u64, BTreeSet<Vec<Elem>>> = BTreeMap::new();
        for x in 0..g.order() as Elem {
            let mut m = vec![0];
            let mut y = x;
            while y != 0 {
                m.push(y);
                y = g.mul(y, x);
            }
            m.sort_unstable();
            by_order.entry(m.len() as u64).or_default().insert(m);
        }
        let enumerated = Decomposition::from_components(by_order.iter().map(|(&d, s)| (Component::new(1, d), s.len() as u64)));
        if formula != oracle || formula != enumerated {
            return fail(format!("type {parts:?}: formula {formula}, oracle {oracle}, enumeration {enumerated}"));
        }
    }
    pass("7 abelian groups of order 3^5: formula = oracle = cyclic subgroup enumeration")
}

fn criterion8(runs: &[Run]) -> Outcome {
    let run = runs.iter().find(|r| r.p == 3).unwrap();
    let members: Vec<(&GroupInstance, &Decomposition, Vec<u64>)> = run
        .groups
        .iter()
        .zip(&run.reports)
        .filter(|(inst, _)| matches!(inst.family.index(), 7 | 8 | 10))
        .map(|(inst, rep)| {
            let g = &inst.group;
            let inv = g.abelian_invariants_mod(&g.whole(), &g.derived_subgroup()).unwrap();
            (inst, &rep.wedderburn.as_ref().unwrap().oracle, inv)
        })
        .collect();
    let mut pairs = 0;
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if (a.1 == b.1) != (a.2 == b.2) {
                return fail(format!("{} vs {}", a.0.name, b.0.name));
            }
            pairs += 1;
        }
    }
    pass(format!("{} members, {pairs} pairs: equal decompositions exactly when G/G' agree", members.len()))
}

fn criterion9(runs: &[Run]) -> Outcome {
    let mut n = 0;
    for run in runs {
        for inst in &run.groups {
            let g = &inst.group;
            let fam = inst.family.index();
            let vz = is_vz_group(g);
            let camina = is_camina_pair(g, &g.center());
            if vz != matches!(fam, 2 | 5) || camina != matches!(fam, 5 | 7 | 8 | 10) {
                return fail(format!("{} at p = {}: vz = {vz}, camina = {camina}", inst.name, run.p));
            }
            n += 1;
        }
    }
    pass(format!("{n} groups: VZ exactly on Phi_2, Phi_5; (G, Z) Camina exactly on Phi_5, Phi_7, Phi_8, Phi_10"))
}

fn criterion10(runs: &[Run]) -> Outcome {
    let limits = [(3, Duration::from_secs(60)), (5, Duration::from_secs(30 * 60))];
    let mut parts = Vec::new();
    for run in runs {
        let limit = limits.iter().find(|l| l.0 == run.p).unwrap().1;
        let failed: Vec<&str> = run.reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
        if !failed.is_empty() {
            return fail(format!("p = {}: failing groups {failed:?}", run.p));
        }
        if run.elapsed > limit {
            return fail(format!("p = {}: {:.1?} exceeds {limit:?}", run.p, run.elapsed));
        }
        parts.push(format!("p = {}: {:.1?} (limit {:?})", run.p, run.elapsed, limit));
    }
    check(true, format!("full verification {}", parts.join(", ")), String::new())
}

fn main() {
    let runs: Vec<Run> = PRIMES.iter().map(|&p| run_suite(p)).collect();
    let results: Vec<(&str, Outcome)> = vec![
        ("catalog integrity", criterion1(&runs)),
        ("counting identity", criterion2(&runs)),
        ("required-pair validity", criterion3(&runs)),
        ("representation validity", criterion4(&runs)),
        ("worked examples", criterion5()),
        ("Wedderburn cross-check", criterion6(&runs)),
        ("Perlis-Walker suite", criterion7()),
        ("isoclinism corollary", criterion8(&runs)),
        ("predicate suite", criterion9(&runs)),
        ("performance envelope", criterion10(&runs)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("{} criterion {:>2} {name} [exact]: {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
