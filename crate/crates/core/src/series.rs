//! Central series, centers, verbal power subgroups and exponents.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::lattice::{left_kernel, IntMatrix};
use crate::pc::{Element, Int, PcPresentation, RelativeOrder};
use crate::primes::{factorize, lcm};
use crate::subgroup::{Subgroup, ENUMERATION_LIMIT};
use crate::{Error, Result};

/// `[A, X]` for a normal subgroup `A`.
pub fn commutator_with_whole(x: &PcPresentation, a: &Subgroup) -> Result<Subgroup> {
    let mut gens = Vec::new();
    for h in a.generators() {
        for i in 0..x.rank() {
            gens.push(x.commutator(&h, &x.generator(i))?);
        }
    }
    Subgroup::normal_closure(x, &gens)
}

/// `X = γ_1 > γ_2 > ... > γ_{c+1} = 1`.
pub fn lower_central_series(x: &PcPresentation) -> Result<Vec<Subgroup>> {
    let mut out = vec![Subgroup::whole(x)];
    while !out.last().expect("nonempty").is_trivial() {
        let next = commutator_with_whole(x, out.last().expect("nonempty"))?;
        if &next == out.last().expect("nonempty") {
            return Err(Error::NotNilpotent("lower central series stalls".into()));
        }
        out.push(next);
    }
    Ok(out)
}

pub fn nilpotency_class(x: &PcPresentation) -> Result<usize> {
    Ok(lower_central_series(x)?.len() - 1)
}

/// Commutator subgroup of a subgroup `w`.
pub fn derived_subgroup(x: &PcPresentation, w: &Subgroup) -> Result<Subgroup> {
    let gens = w.generators();
    let mut comms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in gens.iter().skip(i + 1) {
            comms.push(x.commutator(a, b)?);
        }
    }
    Subgroup::closure_under(x, &comms, w)
}

/// Lower central series of a subgroup `w`, ending in the trivial group.
pub fn subgroup_lower_central_series(x: &PcPresentation, w: &Subgroup) -> Result<Vec<Subgroup>> {
    let wg = w.generators();
    let mut out = vec![w.clone()];
    while !out.last().expect("nonempty").is_trivial() {
        let last = out.last().expect("nonempty");
        let mut comms = Vec::new();
        for a in last.generators() {
            for b in &wg {
                comms.push(x.commutator(&a, b)?);
            }
        }
        let next = Subgroup::closure_under(x, &comms, w)?;
        if &next == last {
            return Err(Error::NotNilpotent("lower central series stalls".into()));
        }
        out.push(next);
    }
    Ok(out)
}

/// Nilpotency class of a subgroup.
pub fn subgroup_class(x: &PcPresentation, w: &Subgroup) -> Result<usize> {
    Ok(subgroup_lower_central_series(x, w)?.len() - 1)
}

/// Kernel of a homomorphism from `w` to `Z^k` or `(Z/r)^k`, given by the
/// values on the rows of `w`. It is generated by `w'` together with
/// `prod rows^e` for `e` running over generators of the kernel lattice.
pub fn kernel_to_abelian(x: &PcPresentation, w: &Subgroup, values: &[Vec<Int>], modulus: Option<Int>) -> Result<Subgroup> {
    let s = w.rows().len();
    assert_eq!(values.len(), s);
    let k = values.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Int>> = values.to_vec();
    if let Some(r) = modulus {
        for i in 0..k {
            let mut v = vec![0; k];
            v[i] = r;
            rows.push(v);
        }
    }
    let mut gens = derived_subgroup(x, w)?.generators();
    if k == 0 {
        return Ok(w.clone());
    }
    let ker = left_kernel(&IntMatrix::from_rows(k, &rows))?;
    let wrows = w.generators();
    for e in ker {
        let mut g = x.identity();
        for (r, &c) in wrows.iter().zip(&e[..s]) {
            if c != 0 {
                g = x.multiply(&g, &x.power(r, c)?)?;
            }
        }
        gens.push(g);
    }
    Subgroup::span(x, &gens)
}

/// The center, computed as `D_n` where `D_m = {x : [x, X] <= G_m}` and each
/// step is the kernel of `x -> (exponent of [x, g_i] at depth m)_i`.
pub fn center(x: &PcPresentation) -> Result<Subgroup> {
    let n = x.rank();
    let mut d = Subgroup::whole(x);
    for m in 0..n {
        let mut values = Vec::new();
        for h in d.generators() {
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                let c = x.commutator(&h, &x.generator(i))?;
                debug_assert!(c.exponents()[..m].iter().all(|&e| e == 0));
                row.push(c.exponents()[m]);
            }
            values.push(row);
        }
        let modulus = x.relative_order(m).finite();
        d = kernel_to_abelian(x, &d, &values, modulus)?;
    }
    Ok(d)
}

/// Upper central series `1 = Z_0 < Z_1 < ... < Z_c = X`.
pub fn upper_central_series(x: &PcPresentation) -> Result<Vec<Subgroup>> {
    let mut out = vec![Subgroup::trivial(x)];
    let mut quotient = x.clone();
    let mut proj: Option<crate::hom::Homomorphism> = None;
    loop {
        let last = out.last().expect("nonempty").clone();
        if last == Subgroup::whole(x) {
            return Ok(out);
        }
        let z = center(&quotient)?;
        if z.is_trivial() {
            return Err(Error::NotNilpotent("upper central series stalls".into()));
        }
        // preimage of Z(X / Z_i) in X
        let mut gens = last.generators();
        let images: Vec<Element> = match &proj {
            None => z.generators(),
            Some(p) => lift_through(x, p, &z)?,
        };
        gens.extend(images);
        let next = Subgroup::span(x, &gens)?;
        let (q, p) = next.quotient(x)?;
        quotient = q;
        proj = Some(p);
        out.push(next);
    }
}

/// Preimages of the generators of `s` under a surjective projection that
/// maps generators to generators or to the identity.
fn lift_through(x: &PcPresentation, p: &crate::hom::Homomorphism, s: &Subgroup) -> Result<Vec<Element>> {
    let q = p.target();
    // a generator of the quotient is the image of the unique source generator
    // mapping onto it
    let mut back = vec![None; q.rank()];
    for (i, img) in p.images().iter().enumerate() {
        if img.depth() < q.rank() && img.exponents().iter().filter(|&&e| e != 0).count() == 1 && img.leading_exponent() == 1 {
            back[img.depth()].get_or_insert(i);
        }
    }
    s.generators()
        .iter()
        .map(|g| {
            let mut w = Vec::new();
            for (k, &e) in g.exponents().iter().enumerate() {
                if e != 0 {
                    let i = back[k].ok_or_else(|| Error::InvalidArgument("projection is not generator-preserving".into()))?;
                    w.push((i, e));
                }
            }
            x.normal_form(&w)
        })
        .collect()
}

/// The verbal subgroup `X^q = <x^q : x in X>`.
///
/// With `N` the normal closure of the `g_i^q`, `X/N` is finite and
/// `X^q = N <r^q>` over coset representatives `r` of `N`.
pub fn verbal_power_subgroup(x: &PcPresentation, q: Int) -> Result<Subgroup> {
    if q < 1 {
        return Err(Error::InvalidArgument(format!("power exponent {q} must be positive")));
    }
    let gens: Vec<Element> = (0..x.rank()).map(|i| x.power(&x.generator(i), q)).collect::<Result<_>>()?;
    let n = Subgroup::normal_closure(x, &gens)?;
    let mut extra = Vec::new();
    for r in n.coset_reps(x)? {
        let p = x.power(&r, q)?;
        if !n.contains(x, &p)? {
            extra.push(p);
        }
    }
    if extra.is_empty() {
        return Ok(n);
    }
    n.join(x, &extra)
}

/// Exponent of a finite subgroup.
pub fn exponent_of(x: &PcPresentation, s: &Subgroup) -> Result<Int> {
    if s.order(x).is_none() {
        return Err(Error::ExponentRequested);
    }
    let mut e: Int = 1;
    for g in s.elements(x)? {
        let o = x.element_order(&g)?.expect("element of a finite subgroup");
        e = lcm(e, o);
    }
    Ok(e)
}

/// Exponent of `Y / M` for `M` normal of finite index in `Y`.
pub fn quotient_exponent(x: &PcPresentation, y: &Subgroup, m: &Subgroup) -> Result<Int> {
    let idx = y.relative_index(x, m)?.finite().ok_or(Error::ExponentRequested)?;
    if idx as usize > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("quotient of order {idx}")));
    }
    let mut e: Int = 1;
    for r in y.relative_coset_reps(x, m)? {
        // order of r modulo M divides idx
        let mut k = 1;
        let mut p = r.clone();
        while !m.contains(x, &p)? {
            p = x.multiply(&p, &r)?;
            k += 1;
        }
        e = lcm(e, k);
    }
    Ok(e)
}

/// Largest power of each prime dividing the order of a finite group, as
/// `max_p v_p(|X|)`.
pub fn max_prime_multiplicity(x: &PcPresentation) -> Result<u32> {
    let o = x.order().ok_or(Error::InfiniteGroup)?;
    Ok(factorize(o).iter().map(|&(_, e)| e).max().unwrap_or(0))
}

/// Positions of the infinite layers.
pub fn infinite_layers(x: &PcPresentation) -> Vec<usize> {
    (0..x.rank()).filter(|&i| x.relative_order(i) == RelativeOrder::Infinite).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pc::fixtures::*;

    fn brute_center(x: &PcPresentation) -> Vec<Element> {
        let els = x.elements().unwrap();
        els.iter().filter(|a| els.iter().all(|b| x.multiply(a, b).unwrap() == x.multiply(b, a).unwrap())).cloned().collect()
    }

    #[test]
    fn heisenberg_series() {
        let h = heisenberg();
        let lcs = lower_central_series(&h).unwrap();
        assert_eq!(lcs.len(), 3);
        assert_eq!(lcs[1].rows(), &[vec![0, 0, 1]]);
        assert_eq!(center(&h).unwrap().rows(), &[vec![0, 0, 1]]);
        assert_eq!(nilpotency_class(&h).unwrap(), 2);
        assert_eq!(nilpotency_class(&free_abelian(2)).unwrap(), 1);
        assert_eq!(nilpotency_class(&cyclic(2)).unwrap(), 1);
        let ucs = upper_central_series(&h).unwrap();
        assert_eq!(ucs.len(), 3);
    }

    #[test]
    fn centers_match_brute_force() {
        for x in [heisenberg_mod(2), heisenberg_mod(3), heisenberg_mod(4), abelian(&[4, 2]), heisenberg_mod(3).direct_product(&cyclic(2))] {
            let z = center(&x).unwrap();
            assert_eq!(z.elements(&x).unwrap(), brute_center(&x), "{}", x.name());
            let ucs = upper_central_series(&x).unwrap();
            assert_eq!(ucs.len() - 1, nilpotency_class(&x).unwrap());
        }
    }

    #[test]
    fn power_subgroups() {
        let h = heisenberg();
        let p = verbal_power_subgroup(&h, 2).unwrap();
        // H^2 contains a^2, b^2 and c^2 but not c: (ab)^2 = a^2 b^2 c
        assert!(p.contains(&h, &h.element(&[2, 0, 0]).unwrap()).unwrap());
        assert!(p.contains(&h, &h.element(&[0, 0, 1]).unwrap()).unwrap());
        let h4 = heisenberg_mod(4);
        for q in [1, 2, 3, 4] {
            let p = verbal_power_subgroup(&h4, q).unwrap();
            let brute: Vec<Element> = h4.elements().unwrap().iter().map(|g| h4.power(g, q).unwrap()).collect();
            let span = Subgroup::span(&h4, &brute).unwrap();
            assert_eq!(p, span, "q = {q}");
        }
        let z = integers();
        assert_eq!(verbal_power_subgroup(&z, 6).unwrap().rows(), &[vec![6]]);
    }

    #[test]
    fn exponents() {
        let h3 = heisenberg_mod(3);
        assert_eq!(exponent_of(&h3, &Subgroup::whole(&h3)).unwrap(), 3);
        let d8 = heisenberg_mod(2);
        assert_eq!(exponent_of(&d8, &Subgroup::whole(&d8)).unwrap(), 4);
        let z = integers();
        assert!(matches!(exponent_of(&z, &Subgroup::whole(&z)), Err(Error::ExponentRequested)));
        let y = Subgroup::span(&z, &[z.element(&[2]).unwrap()]).unwrap();
        let m = Subgroup::span(&z, &[z.element(&[12]).unwrap()]).unwrap();
        assert_eq!(quotient_exponent(&z, &y, &m).unwrap(), 6);
    }

    #[test]
    fn subgroup_classes() {
        let h = heisenberg();
        let span = |v: &[&[Int]]| Subgroup::span(&h, &v.iter().map(|e| h.element(e).unwrap()).collect::<Vec<_>>()).unwrap();
        assert_eq!(subgroup_class(&h, &Subgroup::whole(&h)).unwrap(), nilpotency_class(&h).unwrap());
        assert_eq!(subgroup_class(&h, &span(&[&[1, 0, 0], &[0, 0, 1]])).unwrap(), 1);
        assert_eq!(subgroup_class(&h, &span(&[&[2, 0, 0], &[0, 3, 0]])).unwrap(), 2);
        assert_eq!(subgroup_class(&h, &Subgroup::trivial(&h)).unwrap(), 0);
    }
}
