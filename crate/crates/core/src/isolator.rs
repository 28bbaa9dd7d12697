//! Isolators, root witnesses and n-th roots.
//!
//! The isolator of `Y` with respect to a prime set `P` is the set of `x` with
//! `x^q in Y` for some `P'`-number `q`. In a nilpotent group it is a subgroup,
//! computed here one layer at a time along the truncations `X / G_{m+1}`, in
//! each of which the last generator `z` is central.

use alloc::vec;
use alloc::vec::Vec;

use crate::pc::{Element, Int, PcPresentation, RelativeOrder};
use crate::primes::{divisors, factorize, gcd, mod_inverse, PrimeSet};
use crate::subgroup::{Index, Subgroup, ENUMERATION_LIMIT};
use crate::{Error, Result};

/// `P`-part of `a` for the prime predicate `in_p`.
fn p_part(a: Int, in_p: &dyn Fn(Int) -> bool) -> Int {
    factorize(a).into_iter().filter(|&(p, _)| in_p(p)).map(|(p, e)| p.pow(e)).product()
}

/// Exponent `j` in `v = z^j`, where `v` is supported on the last position.
fn central_exponent(v: &Element) -> Result<Int> {
    let n = v.len();
    if v.exponents()[..n - 1].iter().any(|&e| e != 0) {
        return Err(Error::Inconsistent("power did not land in S Z".into()));
    }
    Ok(v.exponents()[n - 1])
}

pub(crate) fn isolate_by(x: &PcPresentation, y: &Subgroup, in_p: &dyn Fn(Int) -> bool) -> Result<Subgroup> {
    let n = x.rank();
    let mut prev = Subgroup::trivial(&x.truncate(0));
    for m in 0..n {
        let xm = x.truncate(m + 1);
        let s = y.truncate(x, m + 1)?;
        let w = Subgroup::lift(&xm, &prev, m)?;
        let z = xm.generator(m);
        let u = s.join(&xm, core::slice::from_ref(&z))?;
        let nidx = match w.relative_index(&xm, &u)? {
            Index::Finite(k) => k,
            Index::Infinite => return Err(Error::Inconsistent("isolator layer of infinite index".into())),
        };
        // S ∩ <z> = <z^a>
        let a = match (s.leads().into_iter().find(|&(d, _)| d == m), xm.relative_order(m)) {
            (Some((_, lead)), _) => Some(lead),
            (None, RelativeOrder::Finite(r)) => Some(r),
            (None, RelativeOrder::Infinite) => None,
        };
        let sift_j = |g: &Element| -> Result<Int> {
            let p = xm.power(g, nidx)?;
            central_exponent(&s.sift(&xm, &p)?)
        };
        let next = match a {
            Some(a) => {
                // the isolator meets <z> in T = <z^t>, and |<z> : T| = t is a P-number
                let t = p_part(a, in_p);
                let mut gens = s.generators();
                gens.push(xm.power(&z, t)?);
                let inv = if t == 1 { 0 } else { mod_inverse(nidx.rem_euclid(t), t).expect("P'-number is a unit mod a P-number") };
                for g in w.generators() {
                    let j = sift_j(&g)?;
                    let k = (-j).rem_euclid(t) * inv % t.max(1);
                    gens.push(xm.multiply(&g, &xm.power(&z, k)?)?);
                }
                Subgroup::span(&xm, &gens)?
            }
            None => {
                // the isolator meets <z> trivially; find the cosets of U in W
                // containing roots
                let mut solvable = Vec::new();
                for r in w.relative_coset_reps(&xm, &u)? {
                    if sift_j(&r)? % nidx == 0 {
                        solvable.push(r);
                    }
                }
                let iz = u.join(&xm, &solvable)?;
                let mut gens = s.generators();
                for g in iz.generators() {
                    let j = sift_j(&g)?;
                    if j % nidx != 0 {
                        return Err(Error::Inconsistent("root coset without a central correction".into()));
                    }
                    gens.push(xm.multiply(&g, &xm.power(&z, -j / nidx)?)?);
                }
                Subgroup::span(&xm, &gens)?
            }
        };
        prev = next;
    }
    Subgroup::span(x, &prev.generators())
}

/// The `P`-isolator of `y`: all `x` with `x^q in y` for a `P'`-number `q`.
pub fn isolator(x: &PcPresentation, y: &Subgroup, primes: &PrimeSet) -> Result<Subgroup> {
    isolate_by(x, y, &|p| primes.contains(p as u64))
}

pub fn is_isolated(x: &PcPresentation, y: &Subgroup, primes: &PrimeSet) -> Result<bool> {
    Ok(&isolator(x, y, primes)? == y)
}

/// The `P'`-torsion: elements whose order is a finite `P'`-number.
pub fn torsion_isolator(x: &PcPresentation, primes: &PrimeSet) -> Result<Subgroup> {
    isolator(x, &Subgroup::trivial(x), primes)
}

/// The torsion subgroup.
pub fn torsion_subgroup(x: &PcPresentation) -> Result<Subgroup> {
    isolate_by(x, &Subgroup::trivial(x), &|_| false)
}

/// Primes dividing the order of the torsion subgroup.
pub fn torsion_primes(x: &PcPresentation) -> Result<Vec<Int>> {
    let t = torsion_subgroup(x)?;
    let o = t.order(x).ok_or_else(|| Error::Inconsistent("torsion subgroup is infinite".into()))?;
    Ok(factorize(o).into_iter().map(|(p, _)| p).collect())
}

/// `x^q in Y` with `q` the least positive such exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootWitness {
    pub q: Int,
    pub power: Element,
    /// Whether `q` is proved least. The exponents `q` with `x^q in Y` form
    /// the multiples of one number, which divides `|I : Y|`.
    pub minimal: bool,
}

/// Witness that `elem` lies in the root set, or `None`.
pub fn root_witness(x: &PcPresentation, y: &Subgroup, elem: &Element, primes: &PrimeSet) -> Result<Option<RootWitness>> {
    let i = isolator(x, y, primes)?;
    witness_in(x, y, &i, elem)
}

/// [`root_witness`] for several elements, computing the isolator once.
pub fn root_witnesses(x: &PcPresentation, y: &Subgroup, elems: &[Element], primes: &PrimeSet) -> Result<Vec<Option<RootWitness>>> {
    let i = isolator(x, y, primes)?;
    elems.iter().map(|e| witness_in(x, y, &i, e)).collect()
}

fn witness_in(x: &PcPresentation, y: &Subgroup, i: &Subgroup, elem: &Element) -> Result<Option<RootWitness>> {
    if !i.contains(x, elem)? {
        return Ok(None);
    }
    let k = i.relative_index(x, y)?.finite().ok_or_else(|| Error::Inconsistent("isolator of infinite index".into()))?;
    for q in divisors(k) {
        let p = x.power(elem, q)?;
        if y.contains(x, &p)? {
            return Ok(Some(RootWitness { q, power: p, minimal: true }));
        }
    }
    Err(Error::Inconsistent("no root exponent divides the isolator index".into()))
}

/// All `x` with `x^n = y`, sorted. Empty when there are none.
pub fn nth_roots(x: &PcPresentation, y: &Element, n: Int) -> Result<Vec<Element>> {
    if n < 1 {
        return Err(Error::InvalidArgument(alloc::format!("root degree {n} must be positive")));
    }
    if y.len() != x.rank() {
        return Err(Error::InvalidArgument("element of the wrong length".into()));
    }
    let target = y.exponents();
    let mut sols: Vec<Vec<Int>> = vec![Vec::new()];
    for m in 0..x.rank() {
        let xm = x.truncate(m + 1);
        let mut next = Vec::new();
        for s in sols {
            let mut lift = s;
            lift.push(0);
            let p = xm.pow_vec(&lift, n)?;
            debug_assert_eq!(&p[..m], &target[..m]);
            // (lift z^k)^n = lift^n z^{kn}
            let diff = target[m].checked_sub(p[m]).ok_or(Error::Overflow)?;
            match xm.relative_order(m) {
                RelativeOrder::Infinite => {
                    if diff % n == 0 {
                        lift[m] = diff / n;
                        next.push(lift);
                    }
                }
                RelativeOrder::Finite(r) => {
                    let g = gcd(n, r);
                    let diff = diff.rem_euclid(r);
                    if diff % g != 0 {
                        continue;
                    }
                    let rg = r / g;
                    let k0 = if rg == 1 { 0 } else { (diff / g) * mod_inverse((n / g).rem_euclid(rg), rg).expect("coprime") % rg };
                    for t in 0..g {
                        let mut v = lift.clone();
                        v[m] = k0 + t * rg;
                        next.push(v);
                    }
                }
            }
            if next.len() > ENUMERATION_LIMIT {
                return Err(Error::TooLarge("too many partial roots".into()));
            }
        }
        sols = next;
    }
    let mut out = Vec::with_capacity(sols.len());
    for s in sols {
        let e = Element::from_vec(s);
        if &x.power(&e, n)? != y {
            return Err(Error::Inconsistent("lifted root fails".into()));
        }
        out.push(e);
    }
    out.sort();
    Ok(out)
}

/// Some `x` with `x^n = y`.
pub fn nth_root(x: &PcPresentation, y: &Element, n: Int) -> Result<Element> {
    nth_roots(x, y, n)?.into_iter().next().ok_or(Error::NoRootFound)
}
