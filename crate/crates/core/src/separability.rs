//! Separation certificates: finite `p`-group quotients keeping an element
//! outside the image of a subgroup, and the kernels of the regularity
//! statements.

use alloc::format;
use alloc::vec::Vec;

use crate::hom::Homomorphism;
use crate::isolator::{isolator, torsion_isolator};
use crate::pc::{Element, Int, PcPresentation};
use crate::primes::{factorize, PrimeSet};
use crate::series::{quotient_exponent, verbal_power_subgroup};
use crate::subgroup::Subgroup;
use crate::{Error, Result};

/// Search limits for [`separate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationBounds {
    /// Largest prime tried beyond those dividing relative orders.
    pub pmax: u64,
    /// Largest `k` in the kernels generated by `g_i^{p^k}`.
    pub kmax: u32,
}

impl Default for SeparationBounds {
    fn default() -> Self {
        SeparationBounds { pmax: 50, kmax: 16 }
    }
}

/// Largest power `e^t` tried by the regularity witnesses.
const WITNESS_TMAX: u32 = 32;

/// A homomorphism onto a finite `p`-group keeping `x` outside the image of `Y`.
#[derive(Clone, Debug)]
pub struct SeparationWitness {
    pub prime: u64,
    pub k: u32,
    pub kernel: Subgroup,
    pub quotient: PcPresentation,
    pub projection: Homomorphism,
}

impl SeparationWitness {
    /// Re-checks every claim of the certificate against the inputs.
    pub fn verify(&self, x: &PcPresentation, y: &Subgroup, elem: &Element, primes: &PrimeSet) -> Result<()> {
        let fail = |m: &str| Err(Error::HypothesisFailed(format!("separation witness: {m}")));
        if !primes.contains(self.prime) {
            return fail("prime outside the prime set");
        }
        let proj = Homomorphism::new(x.clone(), self.quotient.clone(), self.projection.images().to_vec())?;
        let order = match self.quotient.order() {
            Some(o) => o,
            None => return fail("quotient is infinite"),
        };
        if factorize(order).iter().any(|&(p, _)| p as u64 != self.prime) {
            return fail("quotient order is not a power of the prime");
        }
        if proj.kernel()? != self.kernel {
            return fail("kernel mismatch");
        }
        let img = proj.image_of(y)?;
        if img.contains(&self.quotient, &proj.apply(elem)?)? {
            return fail("element lands in the image of the subgroup");
        }
        Ok(())
    }
}

/// Normal closure of `g_i^{p^k}`; the quotient is a finite `p`-group.
pub fn p_power_kernel(x: &PcPresentation, p: u64, k: u32) -> Result<Subgroup> {
    let q = (p as Int).checked_pow(k).ok_or(Error::Overflow)?;
    let gens = (0..x.rank()).map(|i| x.power(&x.generator(i), q)).collect::<Result<Vec<_>>>()?;
    Subgroup::normal_closure(x, &gens)
}

/// Candidate primes: members of `P` dividing a finite relative order, then
/// the remaining members of `P` up to `pmax`.
fn candidate_primes(x: &PcPresentation, primes: &PrimeSet, pmax: u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    let mut torsion: Vec<u64> = (0..x.rank())
        .filter_map(|i| x.relative_order(i).finite())
        .flat_map(|r| factorize(r).into_iter().map(|(p, _)| p as u64))
        .filter(|&p| primes.contains(p))
        .collect();
    torsion.sort_unstable();
    torsion.dedup();
    out.extend(&torsion);
    out.extend(primes.members_up_to(pmax).into_iter().filter(|p| !torsion.contains(p)));
    out
}

/// Separates `elem` from `Y` in a finite `p`-group quotient with `p in P`.
///
/// Tries `(p, k)` in lexicographic order and accepts the first kernel `N`
/// with `elem` outside `I N`, where `I` is the isolator of `Y`. The returned
/// kernel is `I N` when that is normal and `N` otherwise.
pub fn separate(
    x: &PcPresentation,
    y: &Subgroup,
    elem: &Element,
    primes: &PrimeSet,
    bounds: SeparationBounds,
) -> Result<SeparationWitness> {
    let iso = isolator(x, y, primes)?;
    if iso.contains(x, elem)? {
        return Err(Error::InsideIsolator);
    }
    for p in candidate_primes(x, primes, bounds.pmax) {
        for k in 1..=bounds.kmax {
            let n = p_power_kernel(x, p, k)?;
            let joined = iso.join_subgroup(x, &n)?;
            if joined.contains(x, elem)? {
                continue;
            }
            let kernel = if joined.is_normal(x)? { joined } else { n };
            let (quotient, projection) = kernel.quotient(x)?;
            let w = SeparationWitness { prime: p, k, kernel, quotient, projection };
            w.verify(x, y, elem, primes)?;
            return Ok(w);
        }
    }
    Err(Error::SearchExhausted(format!("no separating quotient with p <= {} and k <= {}", bounds.pmax, bounds.kmax)))
}

/// Residually a `P`-group: no `P'`-torsion.
pub fn residually_c(x: &PcPresentation, primes: &PrimeSet) -> Result<bool> {
    Ok(torsion_isolator(x, primes)?.is_trivial())
}

/// The closure of `Y` in the pro-`P` topology, which is its isolator.
pub fn c_closure(x: &PcPresentation, y: &Subgroup, primes: &PrimeSet) -> Result<Subgroup> {
    isolator(x, y, primes)
}

/// Checks `M <= Y`, `M` normal in `Y` and `Y/M` a finite `P`-group; returns
/// the exponent of `Y/M`.
fn check_section(x: &PcPresentation, y: &Subgroup, m: &Subgroup, primes: &PrimeSet) -> Result<Int> {
    if !m.is_subgroup_of(x, y)? {
        return Err(Error::BadIndex("M is not contained in Y".into()));
    }
    if !m.is_normalized_by(x, y)? {
        return Err(Error::BadIndex("M is not normal in Y".into()));
    }
    let idx = y.relative_index(x, m)?.finite().ok_or_else(|| Error::BadIndex("Y/M is infinite".into()))?;
    if !primes.is_p_number(idx) {
        return Err(Error::BadIndex(format!("|Y : M| = {idx} is not a P-number")));
    }
    quotient_exponent(x, y, m)
}

fn power_kernel(x: &PcPresentation, q: Int) -> Result<Subgroup> {
    let gens = (0..x.rank()).map(|i| x.power(&x.generator(i), q)).collect::<Result<Vec<_>>>()?;
    Subgroup::normal_closure(x, &gens)
}

/// A normal `N` with `X/N` a finite `P`-group and `N ∩ Y <= M`.
///
/// Tries the normal closures of `g_i^{e^t}` with `e` the exponent of `Y/M`.
pub fn quasiregular_witness(x: &PcPresentation, y: &Subgroup, m: &Subgroup, primes: &PrimeSet) -> Result<Subgroup> {
    let e = check_section(x, y, m, primes)?;
    if e == 1 {
        return Ok(Subgroup::whole(x));
    }
    let mut q: Int = 1;
    for _ in 0..WITNESS_TMAX {
        q = q.checked_mul(e).ok_or(Error::Overflow)?;
        let n = power_kernel(x, q)?;
        if n.intersection(x, y)?.is_subgroup_of(x, m)? {
            return Ok(n);
        }
    }
    Err(Error::SearchExhausted(format!("no kernel among the powers {e}^t, t <= {WITNESS_TMAX}")))
}

/// For `Y` and `M` normal in `X`: a normal `N` with `X/N` a finite `P`-group
/// and `N ∩ Y = M`.
pub fn regular_witness(x: &PcPresentation, y: &Subgroup, m: &Subgroup, primes: &PrimeSet) -> Result<Subgroup> {
    if !y.is_normal(x)? || !m.is_normal(x)? {
        return Err(Error::NotNormal);
    }
    let e = check_section(x, y, m, primes)?;
    let mut q: Int = 1;
    for _ in 0..WITNESS_TMAX {
        q = q.checked_mul(e).ok_or(Error::Overflow)?;
        let n = power_kernel(x, q)?.join_subgroup(x, m)?;
        if n.intersection(x, y)? == *m {
            return Ok(n);
        }
        if e == 1 {
            break;
        }
    }
    Err(Error::SearchExhausted(format!("no kernel among the powers {e}^t, t <= {WITNESS_TMAX}")))
}

/// Least `n <= nmax` with `Y ∩ X^{m^n} = 1`.
pub fn power_intersection_exponent(x: &PcPresentation, y: &Subgroup, m: Int, nmax: u32) -> Result<Option<u32>> {
    let mut q: Int = 1;
    for n in 1..=nmax {
        q = q.checked_mul(m).ok_or(Error::Overflow)?;
        let v = verbal_power_subgroup(x, q)?;
        if v.intersection(x, y)?.is_trivial() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pc::fixtures::*;

    fn p(v: &[u64]) -> PrimeSet {
        PrimeSet::explicit(v.iter().copied()).unwrap()
    }

    fn span(x: &PcPresentation, gens: &[&[Int]]) -> Subgroup {
        let g: Vec<Element> = gens.iter().map(|v| x.element(v).unwrap()).collect();
        Subgroup::span(x, &g).unwrap()
    }

    #[test]
    fn residual_examples() {
        assert!(residually_c(&heisenberg(), &p(&[3])).unwrap());
        assert!(!residually_c(&abelian(&[0, 6]), &p(&[2])).unwrap());
        assert!(residually_c(&cyclic(8), &p(&[2])).unwrap());
        assert!(residually_c(&abelian(&[0, 6]), &p(&[2, 3])).unwrap());
    }

    #[test]
    fn separation_examples() {
        let z = integers();
        let y = span(&z, &[&[4]]);
        let a2 = z.element(&[2]).unwrap();
        let w = separate(&z, &y, &a2, &p(&[2]), SeparationBounds::default()).unwrap();
        assert_eq!(w.prime, 2);
        assert_eq!(w.quotient.order(), Some(4));
        let a = z.element(&[1]).unwrap();
        let w = separate(&z, &Subgroup::trivial(&z), &a, &p(&[5]), SeparationBounds::default()).unwrap();
        assert_eq!(w.kernel.rows(), &[alloc::vec![5]]);
        let h = heisenberg();
        let c = span(&h, &[&[0, 0, 1]]);
        let w = separate(&h, &c, &h.generator(0), &p(&[2]), SeparationBounds::default()).unwrap();
        assert_eq!(w.quotient.order(), Some(4));
        assert_eq!(w.kernel, span(&h, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 1]]));
        let y12 = span(&z, &[&[12]]);
        assert!(matches!(
            separate(&z, &y12, &z.element(&[4]).unwrap(), &p(&[2]), SeparationBounds::default()),
            Err(Error::InsideIsolator)
        ));
        let tight = SeparationBounds { pmax: 50, kmax: 1 };
        let y8 = span(&z, &[&[8]]);
        assert!(matches!(separate(&z, &y8, &z.element(&[4]).unwrap(), &p(&[2]), tight), Err(Error::SearchExhausted(_))));
    }

    #[test]
    fn closure_contains_isolator() {
        let z = integers();
        let y = span(&z, &[&[12]]);
        let cl = c_closure(&z, &y, &p(&[2])).unwrap();
        assert_eq!(cl.rows(), &[alloc::vec![4]]);
        let yn = y.join_subgroup(&z, &span(&z, &[&[8]])).unwrap();
        assert!(cl.is_subgroup_of(&z, &yn).unwrap());
    }

    #[test]
    fn regularity_examples() {
        let z = integers();
        let n = quasiregular_witness(&z, &span(&z, &[&[2]]), &span(&z, &[&[6]]), &p(&[3])).unwrap();
        assert_eq!(n.rows(), &[alloc::vec![3]]);
        // the largest valid kernel of 3-power index, by the divisor lattice
        let y = span(&z, &[&[2]]);
        let m = span(&z, &[&[6]]);
        let valid: Vec<u32> =
            (0..6).filter(|&j| span(&z, &[&[3i128.pow(j)]]).intersection(&z, &y).unwrap().is_subgroup_of(&z, &m).unwrap()).collect();
        assert_eq!(valid[0], 1);
        let h = heisenberg();
        let c = span(&h, &[&[0, 0, 1]]);
        let n = quasiregular_witness(&h, &c, &span(&h, &[&[0, 0, 2]]), &p(&[2])).unwrap();
        assert!(n.intersection(&h, &c).unwrap().is_subgroup_of(&h, &span(&h, &[&[0, 0, 2]])).unwrap());
        assert_eq!(quasiregular_witness(&h, &c, &c, &p(&[2])).unwrap(), Subgroup::whole(&h));
        let z2 = free_abelian(2);
        let n = regular_witness(&z2, &span(&z2, &[&[1, 0]]), &span(&z2, &[&[2, 0]]), &p(&[2])).unwrap();
        assert_eq!(n, span(&z2, &[&[2, 0], &[0, 2]]));
        let m4 = span(&h, &[&[0, 0, 4]]);
        let n = regular_witness(&h, &c, &m4, &p(&[2])).unwrap();
        assert_eq!(n.intersection(&h, &c).unwrap(), m4);
        assert!(matches!(quasiregular_witness(&z, &span(&z, &[&[2]]), &span(&z, &[&[6]]), &p(&[2])), Err(Error::BadIndex(_))));
    }

    #[test]
    fn power_intersections() {
        let c8 = cyclic(8);
        let y = span(&c8, &[&[4]]);
        assert_eq!(power_intersection_exponent(&c8, &y, 2, 8).unwrap(), Some(3));
        let h3 = heisenberg_mod(3);
        let y = span(&h3, &[&[1, 0, 0]]);
        assert_eq!(power_intersection_exponent(&h3, &y, 3, 8).unwrap(), Some(1));
    }
}
