//! Brute-force oracle on multiplication tables.
//!
//! Everything here works on element indices of a [`FiniteGroupTable`] and
//! follows the definitions directly: the root set is the set of `x` with some
//! power `x^q` in `Y`, `q` a `P'`-number up to the exponent, and the isolator
//! is the subgroup it generates. [`oracle_compare`] runs the library against
//! these on a battery of fixtures.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use nilsep_core::isolator::{is_isolated, isolator, root_witnesses};
use nilsep_core::primes::{factorize, is_prime};
use nilsep_core::separability::{separate, SeparationBounds};
use nilsep_core::{Element, Int, PcPresentation, PrimeSet, Subgroup};

use crate::error::{Error, Result};
use crate::format::read_presentation;

/// Associativity is checked exhaustively up to this order.
pub const ASSOCIATIVITY_LIMIT: usize = 512;

#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    n: usize,
    table: Vec<u32>,
    labels: Vec<String>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroupTable {
    /// Validates the group axioms: a Latin square with a two-sided identity,
    /// and associativity for orders up to [`ASSOCIATIVITY_LIMIT`].
    pub fn new(rows: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let n = rows.len();
        let bad = |m: String| Err(Error::Syntax(format!("not a group table: {m}")));
        if n == 0 || labels.len() != n {
            return bad("empty table or label count mismatch".into());
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return bad(format!("row {i} has length {}", r.len()));
            }
            let mut seen = vec![false; n];
            for &v in r {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return bad(format!("row {i} is not a permutation"));
                }
                table.push(v as u32);
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for i in 0..n {
                if std::mem::replace(&mut seen[table[i * n + j] as usize], true) {
                    return bad(format!("column {j} is not a permutation"));
                }
            }
        }
        let identity = match (0..n).find(|&e| (0..n).all(|a| table[e * n + a] as usize == a && table[a * n + e] as usize == a)) {
            Some(e) => e,
            None => return bad("no identity".into()),
        };
        let inverse: Vec<usize> =
            (0..n).map(|a| (0..n).find(|&b| table[a * n + b] as usize == identity).expect("Latin square")).collect();
        let t = FiniteGroupTable { n, table, labels, identity, inverse };
        if n <= ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = t.mul(a, b);
                    for c in 0..n {
                        if t.mul(ab, c) != t.mul(a, t.mul(b, c)) {
                            return bad(format!("({a} {b}) {c} differs from {a} ({b} {c})"));
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn power(&self, a: usize, k: u64) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut p = a;
        while p != self.identity {
            p = self.mul(p, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.n).map(|a| self.element_order(a)).fold(1, |acc, o| acc / gcd(acc, o) * o)
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> TableSubgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.mul(a, g);
                if set.insert(b) {
                    frontier.push(b);
                }
            }
        }
        TableSubgroup(set)
    }

    fn is_closed(&self, s: &BTreeSet<usize>) -> bool {
        s.contains(&self.identity) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&self.mul(a, b))))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A subset of a table known to be a subgroup.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TableSubgroup(BTreeSet<usize>);

impl TableSubgroup {
    pub fn new(t: &FiniteGroupTable, set: BTreeSet<usize>) -> Result<Self> {
        if set.iter().any(|&a| a >= t.order()) || !t.is_closed(&set) {
            let labels: Vec<&str> = set.iter().filter(|&&a| a < t.order()).map(|&a| t.label(a)).collect();
            return Err(Error::NotASubgroup(format!("{{{}}}", labels.join(", "))));
        }
        Ok(TableSubgroup(set))
    }

    pub fn elements(&self) -> &BTreeSet<usize> {
        &self.0
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(&a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A finite presentation with its table; table index `i` is the `i`-th
/// normal form in sorted order.
#[derive(Clone, Debug)]
pub struct Materialized {
    pub table: FiniteGroupTable,
    pub elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

impl Materialized {
    pub fn index_of(&self, e: &Element) -> usize {
        self.index[e]
    }

    pub fn subset(&self, x: &PcPresentation, s: &Subgroup) -> Result<BTreeSet<usize>> {
        Ok(s.elements(x)?.iter().map(|e| self.index_of(e)).collect())
    }
}

pub fn materialize(x: &PcPresentation) -> Result<Materialized> {
    if !x.is_finite() {
        return Err(nilsep_core::Error::InfiniteGroup.into());
    }
    let elements = x.elements()?;
    let index: HashMap<Element, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rows = Vec::with_capacity(elements.len());
    for a in &elements {
        rows.push(elements.iter().map(|b| Ok(index[&x.multiply(a, b)?])).collect::<Result<Vec<_>>>()?);
    }
    let labels = elements.iter().map(|e| x.format_element(e)).collect();
    Ok(Materialized { table: FiniteGroupTable::new(rows, labels)?, elements, index })
}

fn is_p_prime_number(primes: &PrimeSet, q: u64) -> bool {
    factorize(q as Int).iter().all(|&(p, _)| !primes.contains(p as u64))
}

/// Least `P'`-number `q` with `a^q` in `Y`.
pub fn oracle_min_root(t: &FiniteGroupTable, y: &TableSubgroup, a: usize, primes: &PrimeSet) -> Option<u64> {
    let e = t.exponent();
    let mut p = a;
    for q in 1..=e {
        if is_p_prime_number(primes, q) && y.contains(p) {
            return Some(q);
        }
        p = t.mul(p, a);
    }
    None
}

pub fn oracle_root_set(t: &FiniteGroupTable, y: &TableSubgroup, primes: &PrimeSet) -> BTreeSet<usize> {
    (0..t.order()).filter(|&a| oracle_min_root(t, y, a, primes).is_some()).collect()
}

/// The subgroup generated by the root set.
pub fn oracle_isolator(t: &FiniteGroupTable, y: &TableSubgroup, primes: &PrimeSet) -> TableSubgroup {
    let roots: Vec<usize> = oracle_root_set(t, y, primes).into_iter().collect();
    t.generate(&roots)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixtureReport {
    pub name: String,
    pub order: usize,
    pub subgroups: usize,
    pub checks: usize,
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub fixtures: Vec<FixtureReport>,
}

impl OracleReport {
    pub fn mismatches(&self) -> usize {
        self.fixtures.iter().map(|f| f.mismatches.len()).sum()
    }

    pub fn checks(&self) -> usize {
        self.fixtures.iter().map(|f| f.checks).sum()
    }
}

/// Prime sets used by [`oracle_compare`] when none are given.
pub fn default_prime_sets() -> Vec<PrimeSet> {
    let e = |v: &[u64]| PrimeSet::explicit(v.iter().copied()).expect("primes");
    vec![e(&[2]), e(&[3]), e(&[2, 3]), e(&[5]), PrimeSet::all_except([3]).expect("primes")]
}

/// Subgroups compared per fixture: the trivial and whole group, every cyclic
/// subgroup and the subgroups generated by two pc generators.
pub fn test_subgroups(x: &PcPresentation) -> Result<Vec<Vec<Element>>> {
    let mut seen: BTreeSet<Vec<Vec<Int>>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut add = |gens: Vec<Element>| -> Result<()> {
        let s = Subgroup::span(x, &gens)?;
        if seen.insert(s.rows().to_vec()) {
            out.push(gens);
        }
        Ok(())
    };
    add(Vec::new())?;
    add((0..x.rank()).map(|i| x.generator(i)).collect())?;
    for e in x.elements()? {
        add(vec![e])?;
    }
    for i in 0..x.rank() {
        for j in i + 1..x.rank() {
            add(vec![x.generator(i), x.generator(j)])?;
        }
    }
    Ok(out)
}

/// Elements per `(Y, P)` pair on which separation is exercised.
const SEPARATION_SAMPLES: usize = 3;

/// Compares the library with the oracle on one fixture.
pub fn compare_fixture(name: &str, x: &PcPresentation, prime_sets: &[PrimeSet]) -> Result<FixtureReport> {
    let m = materialize(x)?;
    let t = &m.table;
    let mut rep = FixtureReport { name: name.to_string(), order: t.order(), ..Default::default() };
    let check = |ok: bool, what: String, rep: &mut FixtureReport| {
        rep.checks += 1;
        if !ok {
            rep.mismatches.push(what);
        }
    };
    let subgroups = test_subgroups(x)?;
    rep.subgroups = subgroups.len();
    for gens in &subgroups {
        let ylib = Subgroup::span(x, gens)?;
        let idx: Vec<usize> = gens.iter().map(|g| m.index_of(g)).collect();
        let y = t.generate(&idx);
        let ylabel = format!("<{}>", gens.iter().map(|g| x.format_element(g)).collect::<Vec<_>>().join(", "));
        check(m.subset(x, &ylib)? == *y.elements(), format!("{ylabel}: span differs from the generated subgroup"), &mut rep);
        for primes in prime_sets {
            let tag = format!("{ylabel} P={primes}");
            let roots = oracle_root_set(t, &y, primes);
            let oiso = oracle_isolator(t, &y, primes);
            check(&roots == oiso.elements(), format!("{tag}: root set is not a subgroup"), &mut rep);
            let iso = isolator(x, &ylib, primes)?;
            check(m.subset(x, &iso)? == *oiso.elements(), format!("{tag}: isolator differs"), &mut rep);
            check(is_isolated(x, &ylib, primes)? == (oiso == y), format!("{tag}: is_isolated differs"), &mut rep);
            let ws = root_witnesses(x, &ylib, &m.elements, primes)?;
            for (a, w) in ws.iter().enumerate() {
                let expected = oracle_min_root(t, &y, a, primes);
                let got = w.as_ref().map(|w| (w.q as u64, m.index_of(&w.power)));
                let want = expected.map(|q| (q, t.power(a, q)));
                check(got == want, format!("{tag}: root witness of {} is {got:?}, expected {want:?}", t.label(a)), &mut rep);
            }
            let outside: Vec<usize> = (0..t.order()).filter(|a| !oiso.contains(*a)).collect();
            let inside: Vec<usize> = oiso.elements().iter().copied().filter(|&a| !y.contains(a)).collect();
            for &a in sample(&outside) {
                let label = format!("{tag}: separating {}", t.label(a));
                match separate(x, &ylib, &m.elements[a], primes, SeparationBounds::default()) {
                    Ok(w) => {
                        let kernel = TableSubgroup::new(t, m.subset(x, &w.kernel)?)?;
                        check(separates(t, &y, &kernel, a, w.prime, primes), label, &mut rep);
                    }
                    Err(e) => check(false, format!("{label}: {e}"), &mut rep),
                }
            }
            for &a in sample(&inside) {
                let refused = matches!(
                    separate(x, &ylib, &m.elements[a], primes, SeparationBounds::default()),
                    Err(nilsep_core::Error::InsideIsolator)
                );
                check(refused, format!("{tag}: {} should be refused", t.label(a)), &mut rep);
            }
        }
    }
    Ok(rep)
}

fn sample(v: &[usize]) -> &[usize] {
    &v[..v.len().min(SEPARATION_SAMPLES)]
}

/// `kernel` is normal with quotient a `p`-group, `p` in `P`, and `a` lies
/// outside `Y kernel`.
fn separates(t: &FiniteGroupTable, y: &TableSubgroup, kernel: &TableSubgroup, a: usize, p: u64, primes: &PrimeSet) -> bool {
    let normal = (0..t.order()).all(|g| kernel.elements().iter().all(|&k| kernel.contains(t.mul(t.mul(t.inverse(g), k), g))));
    let index = t.order() / kernel.len();
    let p_power = factorize(index as Int).iter().all(|&(q, _)| q as u64 == p);
    let outside = y.elements().iter().all(|&h| kernel.elements().iter().all(|&k| t.mul(h, k) != a));
    normal && p_power && is_prime(p as Int) && primes.contains(p) && outside
}

pub fn oracle_compare(fixtures: &[(String, PcPresentation)], prime_sets: &[PrimeSet]) -> Result<OracleReport> {
    let fixtures = fixtures.iter().map(|(n, x)| compare_fixture(n, x, prime_sets)).collect::<Result<_>>()?;
    Ok(OracleReport { fixtures })
}

/// Presentations in `*.pc` files under `dir`, sorted by file name.
pub fn load_fixture_dir(dir: &Path) -> Result<Vec<(String, PcPresentation)>> {
    let entries = fs::read_dir(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "pc"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            Ok((name, read_presentation(&p)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilsep_core::pc::fixtures::*;

    #[test]
    fn tables() {
        let m = materialize(&heisenberg_mod(3)).unwrap();
        assert_eq!(m.table.order(), 27);
        assert_eq!(m.table.exponent(), 3);
        assert_eq!(materialize(&cyclic(8)).unwrap().table.exponent(), 8);
        assert!(materialize(&integers()).is_err());
        let trivial = PcPresentation::new("1", vec![], vec![], vec![]).unwrap();
        assert_eq!(materialize(&trivial).unwrap().table.order(), 1);
    }

    #[test]
    fn rejects_bad_tables() {
        let l = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        assert!(FiniteGroupTable::new(vec![vec![0, 1], vec![0, 1]], l(2)).is_err());
        assert!(FiniteGroupTable::new(vec![vec![1, 0], vec![0, 1]], l(2)).is_ok());
        // a Latin square without associativity: the quasigroup x*y = -x-y mod 3
        let q: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (6 - x - y) % 3).collect()).collect();
        assert!(FiniteGroupTable::new(q, l(3)).is_err());
        let m = materialize(&cyclic(4)).unwrap();
        assert!(TableSubgroup::new(&m.table, BTreeSet::from([0, 1])).is_err());
        assert!(TableSubgroup::new(&m.table, BTreeSet::from([0, 2])).is_ok());
    }

    #[test]
    fn root_sets() {
        // Z/12 with Y = <4> of order 3 and P = {2}: odd q, root set is <4>
        let z12 = cyclic(12);
        let m = materialize(&z12).unwrap();
        let four = m.index_of(&z12.element(&[4]).unwrap());
        let y = m.table.generate(&[four]);
        let two = PrimeSet::single(2).unwrap();
        assert_eq!(oracle_root_set(&m.table, &y, &two), *y.elements());
        let whole = m.table.generate(&[m.index_of(&z12.generator(0))]);
        assert_eq!(oracle_root_set(&m.table, &whole, &two).len(), 12);
        assert_eq!(oracle_root_set(&m.table, &y, &PrimeSet::All), *y.elements());
        // P = {3}: the 2-part is absorbed
        let three = PrimeSet::single(3).unwrap();
        assert_eq!(oracle_root_set(&m.table, &y, &three).len(), 12);
    }

    #[test]
    fn compare_small() {
        let report = oracle_compare(&[("hmod2".into(), heisenberg_mod(2)), ("c6".into(), cyclic(6))], &default_prime_sets()).unwrap();
        assert_eq!(report.mismatches(), 0, "{:?}", report);
        assert!(report.checks() > 100);
        assert_eq!(oracle_compare(&[], &default_prime_sets()).unwrap().fixtures.len(), 0);
    }
}
