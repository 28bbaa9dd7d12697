//! The acceptance suite: one line per criterion. Runs without the libtest
//! harness so the lines always show up, and exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilsep::format::read_presentation;
use nilsep::oracle::{
    default_prime_sets, load_fixture_dir, materialize, oracle_compare, oracle_min_root, FiniteGroupTable, Materialized, TableSubgroup,
};
use nilsep_core::criteria::{check_hnn_cyclic, check_split_by_z, CriteriaBounds, HnnCyclicInstance};
use nilsep_core::isolator::{isolator, nth_roots, root_witnesses, torsion_isolator};
use nilsep_core::pc::fixtures::integers;
use nilsep_core::primes::factorize;
use nilsep_core::separability::{power_intersection_exponent, quasiregular_witness, regular_witness, residually_c, separate, SeparationBounds};
use nilsep_core::series::{max_prime_multiplicity, nilpotency_class, subgroup_class, verbal_power_subgroup};
use nilsep_core::{Element, Error, Int, PcPresentation, PrimeSet, Subgroup};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn fixtures() -> Vec<(String, PcPresentation)> {
    load_fixture_dir(&fixture_dir()).unwrap()
}

fn finite_fixtures(max: Int) -> Vec<(String, PcPresentation)> {
    fixtures().into_iter().filter(|(_, x)| x.order().is_some_and(|o| o <= max)).collect()
}

fn fixture(name: &str) -> PcPresentation {
    read_presentation(&fixture_dir().join(format!("{name}.pc"))).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_prime_set(rng: &mut ChaCha8Rng) -> PrimeSet {
    match rng.gen_range(0..6) {
        0 => PrimeSet::explicit([2]).unwrap(),
        1 => PrimeSet::explicit([3]).unwrap(),
        2 => PrimeSet::explicit([2, 3]).unwrap(),
        3 => PrimeSet::explicit([5]).unwrap(),
        4 => PrimeSet::all_except([3]).unwrap(),
        _ => PrimeSet::All,
    }
}

fn random_element(rng: &mut ChaCha8Rng, x: &PcPresentation, bound: Int) -> Element {
    let v: Vec<Int> = (0..x.rank()).map(|_| rng.gen_range(-bound..=bound)).collect();
    x.element(&v).unwrap()
}

fn random_subgroup(rng: &mut ChaCha8Rng, x: &PcPresentation) -> Subgroup {
    let k = rng.gen_range(0..=2);
    let gens: Vec<Element> = (0..k).map(|_| random_element(rng, x, 3)).collect();
    Subgroup::span(x, &gens).unwrap()
}

/// All elements with every exponent in `-w..=w`, clipped to the relative orders.
fn window(x: &PcPresentation, w: Int) -> Vec<Element> {
    let ranges: Vec<Vec<Int>> = (0..x.rank())
        .map(|i| match x.relative_order(i).finite() {
            Some(r) => (0..r).collect(),
            None => (-w..=w).collect(),
        })
        .collect();
    let mut out = vec![Vec::new()];
    for r in ranges {
        out = out.iter().flat_map(|v| r.iter().map(move |&e| [v.clone(), vec![e]].concat())).collect();
    }
    out.iter().map(|v| x.element_from_normal_form(v.clone()).unwrap()).collect()
}

fn is_p_prime_number(primes: &PrimeSet, q: Int) -> bool {
    factorize(q).iter().all(|&(p, _)| !primes.contains(p as u64))
}

fn table_subgroup(m: &Materialized, x: &PcPresentation, s: &Subgroup) -> TableSubgroup {
    TableSubgroup::new(&m.table, m.subset(x, s).unwrap()).unwrap()
}

fn table_is_normal(t: &FiniteGroupTable, n: &TableSubgroup) -> bool {
    (0..t.order()).all(|g| n.elements().iter().all(|&k| n.contains(t.mul(t.mul(t.inverse(g), k), g))))
}

/// Every subgroup of a table group, generated element by element.
fn all_subgroups(t: &FiniteGroupTable) -> Vec<BTreeSet<usize>> {
    let trivial = BTreeSet::from([t.identity()]);
    let mut seen = BTreeSet::from([trivial.clone()]);
    let mut queue = vec![trivial];
    while let Some(s) = queue.pop() {
        // one representative per right coset S g
        let mut marked = vec![false; t.order()];
        for g in 0..t.order() {
            if marked[g] {
                continue;
            }
            for &h in &s {
                marked[t.mul(h, g)] = true;
            }
            if s.contains(&g) {
                continue;
            }
            let mut gens: Vec<usize> = s.iter().copied().collect();
            gens.push(g);
            let next = t.generate(&gens).elements().clone();
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

fn criterion_1() -> Outcome {
    let fx = finite_fixtures(243);
    let start = Instant::now();
    let report = oracle_compare(&fx, &default_prime_sets()).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let first: Vec<&String> = report.fixtures.iter().flat_map(|f| &f.mismatches).take(3).collect();
    ensure(report.mismatches() == 0, || format!("{} mismatches, e.g. {first:?}", report.mismatches()))?;
    ensure(fx.len() >= 70, || format!("only {} fixtures", fx.len()))?;
    ensure(secs < 60.0, || format!("battery took {secs:.1} s"))?;
    Ok(format!("{} fixtures, {} checks, 0 mismatches, {secs:.1} s", fx.len(), report.checks()))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut groups: Vec<PcPresentation> = fixtures().into_iter().map(|(_, x)| x).filter(|x| x.order().is_none_or(|o| o <= 243)).collect();
    let h = fixture("heisenberg");
    let z2 = fixture("z2");
    groups.extend([h.truncate(2), z2.truncate(1)]);
    for m in [4, 6] {
        let hm = nilsep::format::parse_presentation(&format!(
            "group H{m}\ngen a order {m} weight 1\ngen b order {m} weight 1\ngen c order {m} weight 2\nconj b ^ a = b^1 c^1\n"
        ))
        .unwrap();
        groups.push(hm);
    }
    let mut elements = 0usize;
    for inst in 0..200 {
        // every fourth instance uses H or Z^2 themselves
        let x = match inst % 4 {
            0 => [&h, &z2][inst / 4 % 2].clone(),
            _ => groups.choose(&mut rng).unwrap().clone(),
        };
        let y = random_subgroup(&mut rng, &x);
        let primes = random_prime_set(&mut rng);
        let iso = isolator(&x, &y, &primes).map_err(|e| e.to_string())?;
        let tag = || format!("instance {inst}: {} Y={:?} P={primes}", x.name(), y.generators());
        if x.is_finite() {
            let m = materialize(&x).unwrap();
            let ty = table_subgroup(&m, &x, &y);
            let ws = root_witnesses(&x, &y, &m.elements, &primes).unwrap();
            for (a, w) in ws.iter().enumerate() {
                elements += 1;
                let expected = oracle_min_root(&m.table, &ty, a, &primes);
                ensure(w.as_ref().map(|w| w.q as u64) == expected, || format!("{}: {}", tag(), m.table.label(a)))?;
                ensure(w.is_some() == iso.contains(&x, &m.elements[a]).unwrap(), tag)?;
                if let Some(w) = w {
                    ensure(m.elements[m.table.power(a, w.q as u64)] == w.power && ty.contains(m.index_of(&w.power)), tag)?;
                }
            }
        } else {
            let els = window(&x, 2);
            let ws = root_witnesses(&x, &y, &els, &primes).unwrap();
            for (e, w) in els.iter().zip(&ws) {
                elements += 1;
                ensure(w.is_some() == iso.contains(&x, e).unwrap(), tag)?;
                let hits: Vec<Int> =
                    (1..=64).filter(|&q| is_p_prime_number(&primes, q) && y.contains(&x, &x.power(e, q).unwrap()).unwrap()).collect();
                match w {
                    Some(w) => {
                        ensure(is_p_prime_number(&primes, w.q), tag)?;
                        ensure(x.power(e, w.q).unwrap() == w.power && y.contains(&x, &w.power).unwrap(), tag)?;
                        if w.q <= 64 {
                            ensure(w.minimal && hits.first() == Some(&w.q), || format!("{}: q={} hits={hits:?}", tag(), w.q))?;
                        }
                    }
                    None => ensure(hits.is_empty(), || format!("{}: {} has a root exponent", tag(), x.format_element(e)))?,
                }
            }
        }
    }
    Ok(format!("200 instances, {elements} elements, exact"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for name in ["heisenberg", "filiform4", "z2"] {
        let x = fixture(name);
        for _ in 0..20 {
            let y = random_subgroup(&mut rng, &x);
            let c = subgroup_class(&x, &y).unwrap();
            for primes in default_prime_sets() {
                let iso = isolator(&x, &y, &primes).unwrap();
                let ci = subgroup_class(&x, &iso).unwrap();
                ensure(ci == c, || format!("{name}: class {ci} against {c} for {:?} P={primes}", y.generators()))?;
                checked += 1;
            }
        }
    }
    let two = PrimeSet::explicit([2]).unwrap();
    let mut inflation = Vec::new();
    for name in ["zxhmod3", "zxmaxclass81"] {
        let x = fixture(name);
        let y = Subgroup::span(&x, &[x.generator(0)]).unwrap();
        let iso = isolator(&x, &y, &two).unwrap();
        let torsion = torsion_isolator(&x, &two).unwrap();
        let (q, _) = Subgroup::span(&x, &[x.generator(0)]).unwrap().quotient(&x).map_err(|e| e.to_string())?;
        let c = nilpotency_class(&q).unwrap();
        let (cy, ci) = (subgroup_class(&x, &y).unwrap(), subgroup_class(&x, &iso).unwrap());
        ensure(torsion.order(&x) == q.order(), || format!("{name}: torsion part"))?;
        ensure(cy == 1 && ci == c && c > 1, || format!("{name}: Y of class {cy}, isolator of class {ci}, expected {c}"))?;
        inflation.push(format!("{name} 1 -> {ci}"));
    }
    Ok(format!("{checked} torsion-free cases equal; inflation {}", inflation.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let groups: Vec<PcPresentation> = fixtures().into_iter().map(|(_, x)| x).filter(|x| x.order().is_none_or(|o| o <= 243)).collect();
    let (mut separated, mut refused) = (0, 0);
    for inst in 0..200 {
        let x = groups.choose(&mut rng).unwrap();
        let y = random_subgroup(&mut rng, x);
        let primes = random_prime_set(&mut rng);
        let e = random_element(&mut rng, x, 3);
        let tag = || format!("instance {inst}: {} Y={:?} x={} P={primes}", x.name(), y.generators(), x.format_element(&e));
        match separate(x, &y, &e, &primes, SeparationBounds::default()) {
            Ok(w) => {
                w.verify(x, &y, &e, &primes).map_err(|err| format!("{}: {err}", tag()))?;
                ensure(primes.contains(w.prime), tag)?;
                if x.is_finite() {
                    let m = materialize(x).unwrap();
                    let t = &m.table;
                    let k = table_subgroup(&m, x, &w.kernel);
                    let ty = table_subgroup(&m, x, &y);
                    let a = m.index_of(&e);
                    let index = t.order() / k.len();
                    ensure(table_is_normal(t, &k), tag)?;
                    ensure(factorize(index as Int).iter().all(|&(p, _)| p as u64 == w.prime), tag)?;
                    ensure(ty.elements().iter().all(|&h| k.elements().iter().all(|&n| t.mul(h, n) != a)), tag)?;
                } else {
                    // the projection must be a homomorphism on random products
                    for _ in 0..5 {
                        let (u, v) = (random_element(&mut rng, x, 3), random_element(&mut rng, x, 3));
                        let lhs = w.projection.apply(&x.multiply(&u, &v).unwrap()).unwrap();
                        let rhs = w.quotient.multiply(&w.projection.apply(&u).unwrap(), &w.projection.apply(&v).unwrap()).unwrap();
                        ensure(lhs == rhs, tag)?;
                    }
                }
                separated += 1;
            }
            Err(Error::InsideIsolator) => {
                let ws = root_witnesses(x, &y, std::slice::from_ref(&e), &primes).unwrap();
                let w = ws[0].as_ref().ok_or_else(|| format!("{}: refusal without a witness", tag()))?;
                ensure(is_p_prime_number(&primes, w.q) && y.contains(x, &x.power(&e, w.q).unwrap()).unwrap(), tag)?;
                refused += 1;
            }
            Err(err) => return Err(format!("{}: {err}", tag())),
        }
    }
    ensure(separated > 0 && refused > 0, || format!("{separated} separated, {refused} refused"))?;
    Ok(format!("{separated} witnesses verified, {refused} refusals certified"))
}

fn criterion_5() -> Outcome {
    let (mut yes, mut no) = (0, 0);
    for (name, x) in fixtures() {
        let m = if x.order().is_some_and(|o| o <= 729) { Some(materialize(&x).unwrap()) } else { None };
        for primes in default_prime_sets() {
            let r = residually_c(&x, &primes).unwrap();
            ensure(r == torsion_isolator(&x, &primes).unwrap().is_trivial(), || format!("{name} P={primes}"))?;
            if let Some(m) = &m {
                // a finite group is residually a P-group exactly when it is one
                let brute = (0..m.table.order()).all(|a| is_p_number(&primes, m.table.element_order(a)));
                ensure(r == brute, || format!("{name} P={primes}: oracle says {brute}"))?;
            }
            if r {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    ensure(yes > 0 && no > 0, || format!("{yes} yes, {no} no"))?;
    Ok(format!("{yes} residual, {no} not residual"))
}

fn is_p_number(primes: &PrimeSet, n: u64) -> bool {
    factorize(n as Int).iter().all(|&(p, _)| primes.contains(p as u64))
}

fn criterion_6() -> Outcome {
    let h = fixture("heisenberg");
    let mut checked = 0;
    for n in [2i128, 3] {
        let v = verbal_power_subgroup(&h, n * n).unwrap();
        let mut brute: HashMap<Element, Vec<Element>> = HashMap::new();
        for a in -2 * n..=2 * n {
            for b in -2 * n..=2 * n {
                for c in -60..=60 {
                    let r = h.element(&[a, b, c]).unwrap();
                    brute.entry(h.power(&r, n).unwrap()).or_default().push(r);
                }
            }
        }
        let w = 2 * n * n;
        for a in -w..=w {
            for b in -w..=w {
                for c in -w..=w {
                    let y = h.element(&[a, b, c]).unwrap();
                    if !v.contains(&h, &y).unwrap() {
                        continue;
                    }
                    let found = brute.get(&y).cloned().unwrap_or_default();
                    let roots = nth_roots(&h, &y, n).unwrap();
                    ensure(found.len() == 1, || format!("{}: {} roots in the search box", h.format_element(&y), found.len()))?;
                    ensure(roots == found, || format!("{}: library {roots:?}, box {found:?}", h.format_element(&y)))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} elements of H^4 and H^9, each with exactly one root"))
}

fn criterion_7() -> Outcome {
    let z = integers();
    let sets = ["2", "3", "2,3", "5", "3,5,7", "all-except:2", "all-except:3", "all"];
    let verdict = |m: Int, n: Int, p: &PrimeSet| {
        let inst = HnnCyclicInstance { group: z.clone(), h: z.element(&[m]).unwrap(), k: z.element(&[n]).unwrap(), primes: p.clone() };
        check_hnn_cyclic(&inst).unwrap()
    };
    let name = |v: &nilsep_core::criteria::Verdict| v.outcome.to_string();
    let mut rows = Vec::new();
    for s in sets {
        let p = nilsep::format::parse_primes(s).unwrap();
        let two = p.contains(2);
        let expect = |yes: bool| if yes { "yes" } else { "no" };
        let bs11 = check_split_by_z(&z, vec![z.element(&[-1]).unwrap()], &p, &CriteriaBounds::default()).unwrap();
        let got = [name(&bs11), name(&verdict(2, 3, &p)), name(&verdict(2, 2, &p)), name(&verdict(2, -2, &p))];
        let want = [expect(two), "no", expect(two), expect(two)];
        ensure(got == want, || format!("P={s}: got {got:?}, expected {want:?}"))?;
        rows.push(s);
    }
    Ok(format!("BS(1,-1), BS(2,3), BS(2,2), BS(2,-2) over {} prime sets", rows.len()))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let groups: Vec<PcPresentation> = fixtures().into_iter().map(|(_, x)| x).filter(|x| x.order().is_none_or(|o| o <= 243)).collect();
    let (mut quasi, mut regular) = (0, 0);
    for inst in 0..100 {
        let x = groups.choose(&mut rng).unwrap();
        let p = [2u64, 3][rng.gen_range(0..2)];
        let primes = PrimeSet::explicit([p]).unwrap();
        let k = rng.gen_range(1..=2);
        let q = (p as Int).pow(k);
        let gens: Vec<Element> = (0..rng.gen_range(1..=2)).map(|_| random_element(&mut rng, x, 3)).collect();
        let is_regular = inst % 2 == 1;
        let y = if is_regular { Subgroup::normal_closure(x, &gens).unwrap() } else { Subgroup::span(x, &gens).unwrap() };
        let powers: Vec<Element> = y.generators().iter().map(|g| x.power(g, q).unwrap()).collect();
        let m = if is_regular { Subgroup::normal_closure(x, &powers).unwrap() } else { Subgroup::closure_under(x, &powers, &y).unwrap() };
        let tag = || format!("instance {inst}: {} Y={:?} M={:?} P={primes}", x.name(), y.generators(), m.generators());
        let n = if is_regular { regular_witness(x, &y, &m, &primes) } else { quasiregular_witness(x, &y, &m, &primes) }
            .map_err(|e| format!("{}: {e}", tag()))?;
        ensure(n.is_normal(x).unwrap(), tag)?;
        let index = n.index(x).finite().ok_or_else(|| format!("{}: infinite index", tag()))?;
        ensure(primes.is_p_number(index), tag)?;
        let meet = y.intersection(x, &n).unwrap();
        if is_regular {
            ensure(meet == m, tag)?;
            regular += 1;
        } else {
            ensure(meet.is_subgroup_of(x, &m).unwrap(), tag)?;
            quasi += 1;
        }
        if x.is_finite() {
            let mt = materialize(x).unwrap();
            let (tn, ty, tm) = (table_subgroup(&mt, x, &n), table_subgroup(&mt, x, &y), table_subgroup(&mt, x, &m));
            ensure(table_is_normal(&mt.table, &tn), tag)?;
            let meet: BTreeSet<usize> = tn.elements().intersection(ty.elements()).copied().collect();
            let ok = if is_regular { &meet == tm.elements() } else { meet.is_subset(tm.elements()) };
            ensure(ok, || format!("{}: table disagrees", tag()))?;
        }
    }
    Ok(format!("{quasi} quasiregular and {regular} regular witnesses meet their contracts"))
}

fn criterion_9() -> Outcome {
    let mut subgroups = 0;
    let mut fixtures_done = 0;
    for (name, x) in finite_fixtures(243) {
        let m = materialize(&x).unwrap();
        let t = &m.table;
        let bound = nilpotency_class(&x).unwrap() as u32 * max_prime_multiplicity(&x).unwrap();
        let mut powers: BTreeMap<u64, BTreeSet<usize>> = BTreeMap::new();
        let mut verbal = |q: u64| -> BTreeSet<usize> {
            powers
                .entry(q)
                .or_insert_with(|| {
                    let gens: Vec<usize> = (0..t.order()).map(|g| t.power(g, q)).collect();
                    t.generate(&gens).elements().clone()
                })
                .clone()
        };
        for s in all_subgroups(t) {
            let gens: Vec<Element> = s.iter().map(|&a| m.elements[a].clone()).collect();
            let y = Subgroup::span(&x, &gens).unwrap();
            let e = s.iter().map(|&a| t.element_order(a)).fold(1, num_lcm);
            let n = power_intersection_exponent(&x, &y, e as Int, bound.max(1))
                .map_err(|err| format!("{name}: {err}"))?
                .ok_or_else(|| format!("{name}: no n <= {bound} for a subgroup of order {} and exponent {e}", s.len()))?;
            let q = e.pow(n);
            let meet = verbal(q).intersection(&s).count();
            ensure(meet == 1, || format!("{name}: Y ∩ X^{q} has {meet} elements"))?;
            if n > 1 {
                let prev = verbal(q / e).intersection(&s).count();
                ensure(prev > 1, || format!("{name}: n = {n} is not least"))?;
            }
            subgroups += 1;
        }
        fixtures_done += 1;
    }
    Ok(format!("{subgroups} subgroups across {fixtures_done} finite fixtures"))
}

fn num_lcm(a: u64, b: u64) -> u64 {
    let g = nilsep_core::primes::gcd(a as Int, b as Int) as u64;
    a / g * b
}

fn criterion_10() -> Outcome {
    let f = |n: &str| fixture_dir().join(n).to_string_lossy().into_owned();
    let (h, z2) = (f("heisenberg.pc"), f("z2.pc"));
    let runs: Vec<Vec<String>> = vec![
        vec!["isolate".into(), "--group".into(), h.clone(), "--subgroup".into(), "a^2; b^3".into(), "--primes".into(), "2".into()],
        vec!["--json".into(), "roots".into(), "--group".into(), h.clone(), "--subgroup".into(), "a^2; b^2".into(), "--primes".into(), "3".into(), "--element".into(), "a b".into()],
        vec!["separate".into(), "--group".into(), f("maxclass81.pc"), "--subgroup".into(), "b".into(), "--primes".into(), "3".into(), "--element".into(), "a".into()],
        vec!["--json".into(), "separate".into(), "--group".into(), h.clone(), "--subgroup".into(), "a^4".into(), "--primes".into(), "all".into(), "--element".into(), "a b".into()],
        vec!["check".into(), "hnn-chain".into(), "--group".into(), z2.clone(), "--h-gens".into(), "a^2".into(), "--k-gens".into(), "a^3".into(), "--phi".into(), "a^3".into(), "--primes".into(), "2,3".into()],
        vec!["--json".into(), "check".into(), "graph".into(), "--spec".into(), f("heisenberg-tree.graph"), "--primes".into(), "3".into()],
        vec!["nthroot".into(), "--group".into(), h.clone(), "--element".into(), "a^9 b^9 c^9".into(), "--n".into(), "3".into()],
        vec!["oracle".into(), "compare".into(), f("hmod3.pc"), f("cyclic12.pc")],
    ];
    for args in &runs {
        let outputs: Vec<(Vec<u8>, Vec<u8>, Option<i32>)> = (0..3)
            .map(|_| {
                let o = Command::new(env!("CARGO_BIN_EXE_nilsep")).args(args).output().unwrap();
                (o.stdout, o.stderr, o.status.code())
            })
            .collect();
        ensure(!outputs[0].0.is_empty(), || format!("{args:?}: no output"))?;
        ensure(outputs.iter().all(|o| o == &outputs[0]), || format!("{args:?}: outputs differ"))?;
    }
    Ok(format!("{} commands, 3 runs each, byte-identical", runs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence on fixtures up to order 243", criterion_1),
        ("isolator equals the witnessed root set", criterion_2),
        ("isolator class preservation and torsion inflation", criterion_3),
        ("separation witnesses verify, refusals are certified", criterion_4),
        ("residually C iff no P'-torsion", criterion_5),
        ("n-th roots in H^(n^2) exist and are unique", criterion_6),
        ("Baumslag-Solitar verdict table", criterion_7),
        ("quasiregular and regular witness contracts", criterion_8),
        ("power subgroups eventually miss finite subgroups", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
