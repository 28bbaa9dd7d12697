//! Subgroups as standardized induced generating sequences.
//!
//! A standardized sequence has one row per occupied depth. The leading
//! exponent of a row is positive and, on a finite layer of relative order
//! `r`, a divisor of `r`; every row is reduced at the depths of the later rows
//! into `[0, lead)`. Two subgroups are equal exactly when their rows agree.
//!
//! Sifting an element on the right through the rows reduces it to the unique
//! representative of its left coset whose exponent at each occupied depth lies
//! in `[0, lead)`. Membership is sifting to the identity.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::hom::Homomorphism;
use crate::pc::{Element, GeneratorSpec, Int, PcPresentation, RelativeOrder, Word};
use crate::primes::{gcd, mod_inverse};
use crate::{Error, Result};

/// Upper bound on enumerations of elements or cosets.
pub const ENUMERATION_LIMIT: usize = 1 << 20;

/// Index of a subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Index {
    Finite(Int),
    Infinite,
}

impl Index {
    pub fn finite(self) -> Option<Int> {
        match self {
            Index::Finite(k) => Some(k),
            Index::Infinite => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(k) => write!(f, "{k}"),
            Index::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    rank: usize,
    /// Standardized rows in increasing depth.
    rows: Vec<Vec<Int>>,
}

fn depth(v: &[Int]) -> usize {
    v.iter().position(|&e| e != 0).unwrap_or(v.len())
}

impl Subgroup {
    pub fn trivial(x: &PcPresentation) -> Subgroup {
        Subgroup { rank: x.rank(), rows: Vec::new() }
    }

    pub fn whole(x: &PcPresentation) -> Subgroup {
        Subgroup { rank: x.rank(), rows: (0..x.rank()).map(|i| x.generator(i).into_vec()).collect() }
    }

    /// The subgroup generated by `gens`.
    pub fn span(x: &PcPresentation, gens: &[Element]) -> Result<Subgroup> {
        let mut sieve = Sieve::new(x);
        for g in gens {
            check_len(x, g)?;
            sieve.insert(g.exponents().to_vec())?;
        }
        sieve.close()?;
        sieve.finish()
    }

    /// The subgroup generated by `self` and `more`.
    pub fn join(&self, x: &PcPresentation, more: &[Element]) -> Result<Subgroup> {
        let mut gens = self.generators();
        gens.extend_from_slice(more);
        Subgroup::span(x, &gens)
    }

    pub fn join_subgroup(&self, x: &PcPresentation, other: &Subgroup) -> Result<Subgroup> {
        self.join(x, &other.generators())
    }

    /// The standardized sequence as elements.
    pub fn generators(&self) -> Vec<Element> {
        self.rows.iter().cloned().map(Element::from_vec).collect()
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn is_trivial(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row with the given depth.
    fn row_at(&self, d: usize) -> Option<&Vec<Int>> {
        self.rows.iter().find(|r| depth(r) == d)
    }

    /// `(depth, leading exponent)` of each row.
    pub fn leads(&self) -> Vec<(usize, Int)> {
        self.rows.iter().map(|r| (depth(r), r[depth(r)])).collect()
    }

    /// Canonical representative of the left coset `u S`.
    pub fn coset_rep(&self, x: &PcPresentation, u: &Element) -> Result<Element> {
        check_len(x, u)?;
        let mut v = u.exponents().to_vec();
        for r in &self.rows {
            let d = depth(r);
            let q = v[d].div_euclid(r[d]);
            if q != 0 {
                let p = x.pow_vec(r, -q)?;
                v = x.mul_vec(&v, &p)?;
            }
        }
        Ok(Element::from_vec(v))
    }

    /// Remainder of `u` after sifting; the identity exactly for members.
    pub fn sift(&self, x: &PcPresentation, u: &Element) -> Result<Element> {
        check_len(x, u)?;
        let mut v = u.exponents().to_vec();
        loop {
            let d = depth(&v);
            if d == v.len() {
                return Ok(Element::from_vec(v));
            }
            let Some(r) = self.row_at(d) else {
                return Ok(Element::from_vec(v));
            };
            if v[d] % r[d] != 0 {
                return Ok(Element::from_vec(v));
            }
            let p = x.pow_vec(r, -(v[d] / r[d]))?;
            v = x.mul_vec(&v, &p)?;
        }
    }

    pub fn contains(&self, x: &PcPresentation, u: &Element) -> Result<bool> {
        Ok(self.sift(x, u)?.is_identity())
    }

    /// Writes a member as `prod rows[i]^{e_i}`.
    pub fn coordinates(&self, x: &PcPresentation, u: &Element) -> Result<Vec<Int>> {
        check_len(x, u)?;
        let mut v = u.exponents().to_vec();
        let mut out = vec![0; self.rows.len()];
        for (i, r) in self.rows.iter().enumerate() {
            let d = depth(r);
            if depth(&v) < d {
                return Err(Error::NotInSubgroup);
            }
            if v[d] % r[d] != 0 {
                return Err(Error::NotInSubgroup);
            }
            let q = v[d] / r[d];
            out[i] = q;
            v = x.mul_vec(&v, &x.pow_vec(r, -q)?)?;
        }
        if v.iter().any(|&e| e != 0) {
            return Err(Error::NotInSubgroup);
        }
        Ok(out)
    }

    pub fn is_subgroup_of(&self, x: &PcPresentation, other: &Subgroup) -> Result<bool> {
        for g in self.generators() {
            if !other.contains(x, &g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `|X : S|`.
    pub fn index(&self, x: &PcPresentation) -> Index {
        Subgroup::whole(x).relative_index(x, self).expect("every subgroup lies in the whole group")
    }

    /// `|self : sub|` for a subgroup `sub` of `self`.
    pub fn relative_index(&self, x: &PcPresentation, sub: &Subgroup) -> Result<Index> {
        let mut k: Int = 1;
        for (d, lead) in self.leads() {
            match (sub.row_at(d), x.relative_order(d)) {
                (Some(r), _) => {
                    if r[d] % lead != 0 {
                        return Err(Error::NotInSubgroup);
                    }
                    k = k.checked_mul(r[d] / lead).ok_or(Error::Overflow)?;
                }
                (None, RelativeOrder::Finite(o)) => k = k.checked_mul(o / lead).ok_or(Error::Overflow)?,
                (None, RelativeOrder::Infinite) => return Ok(Index::Infinite),
            }
        }
        if sub.leads().iter().any(|&(d, _)| self.row_at(d).is_none()) {
            return Err(Error::NotInSubgroup);
        }
        Ok(Index::Finite(k))
    }

    /// Order of the subgroup, `None` when infinite.
    pub fn order(&self, x: &PcPresentation) -> Option<Int> {
        let mut k: Int = 1;
        for (d, lead) in self.leads() {
            let o = x.relative_order(d).finite()?;
            k = k.checked_mul(o / lead)?;
        }
        Some(k)
    }

    /// Relative orders of the rows: `r_d / lead` on finite layers.
    pub fn row_orders(&self, x: &PcPresentation) -> Vec<Option<Int>> {
        self.leads().iter().map(|&(d, lead)| x.relative_order(d).finite().map(|o| o / lead)).collect()
    }

    /// All elements of a finite subgroup, sorted.
    pub fn elements(&self, x: &PcPresentation) -> Result<Vec<Element>> {
        let orders: Vec<Int> = self.row_orders(x).into_iter().collect::<Option<_>>().ok_or(Error::InfiniteGroup)?;
        let total = orders.iter().try_fold(1usize, |a, &o| a.checked_mul(o as usize)).filter(|&t| t <= ENUMERATION_LIMIT);
        if total.is_none() {
            return Err(Error::TooLarge(format!("subgroup of order {:?}", self.order(x))));
        }
        let mut out = vec![x.identity().into_vec()];
        // right to left: every element is rows[0]^e0 * ... * rows[s-1]^e_{s-1}
        for (r, &o) in self.rows.iter().zip(&orders).rev() {
            let mut next = Vec::with_capacity(out.len() * o as usize);
            let mut p = x.identity().into_vec();
            for _ in 0..o {
                for t in &out {
                    next.push(x.mul_vec(&p, t)?);
                }
                p = x.mul_vec(&p, r)?;
            }
            out = next;
        }
        let mut out: Vec<Element> = out.into_iter().map(Element::from_vec).collect();
        out.sort();
        Ok(out)
    }

    /// Canonical representatives of the left cosets of `S` in `X`, sorted.
    pub fn coset_reps(&self, x: &PcPresentation) -> Result<Vec<Element>> {
        let n = x.rank();
        let mut ranges = Vec::with_capacity(n);
        for d in 0..n {
            let bound = match (self.row_at(d), x.relative_order(d)) {
                (Some(r), _) => r[d],
                (None, RelativeOrder::Finite(o)) => o,
                (None, RelativeOrder::Infinite) => return Err(Error::InfiniteGroup),
            };
            ranges.push(bound);
        }
        let total = ranges.iter().try_fold(1usize, |a, &o| a.checked_mul(o as usize)).filter(|&t| t <= ENUMERATION_LIMIT);
        if total.is_none() {
            return Err(Error::TooLarge(format!("index {}", self.index(x))));
        }
        let mut out = Vec::new();
        let mut cur = vec![0; n];
        loop {
            out.push(Element::from_vec(cur.clone()));
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < ranges[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Left coset representatives of `sub` in `self`, by closing the orbit of
    /// the trivial coset under left multiplication by the rows of `self`.
    pub fn relative_coset_reps(&self, x: &PcPresentation, sub: &Subgroup) -> Result<Vec<Element>> {
        let idx = self.relative_index(x, sub)?;
        if idx == Index::Infinite {
            return Err(Error::InfiniteGroup);
        }
        let mut seen = alloc::collections::BTreeSet::new();
        let start = x.identity();
        seen.insert(start.clone());
        let mut queue = vec![start];
        let gens = self.generators();
        while let Some(r) = queue.pop() {
            for g in &gens {
                let next = sub.coset_rep(x, &x.multiply(g, &r)?)?;
                if seen.insert(next.clone()) {
                    if seen.len() > ENUMERATION_LIMIT {
                        return Err(Error::TooLarge(format!("index {idx}")));
                    }
                    queue.push(next);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Normalized by every generator of `X`.
    pub fn is_normal(&self, x: &PcPresentation) -> Result<bool> {
        self.is_normalized_by(x, &Subgroup::whole(x))
    }

    /// Normalized by every row of `w`. In polycyclic groups `S^g <= S`
    /// already forces `S^g = S`, so inverses need no separate check.
    pub fn is_normalized_by(&self, x: &PcPresentation, w: &Subgroup) -> Result<bool> {
        for g in w.generators() {
            for h in self.generators() {
                if !self.contains(x, &x.conjugate(&h, &g)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Smallest subgroup containing `gens` and normalized by `w`.
    pub fn closure_under(x: &PcPresentation, gens: &[Element], w: &Subgroup) -> Result<Subgroup> {
        let conj = w.generators();
        let mut s = Subgroup::span(x, gens)?;
        loop {
            let mut extra = Vec::new();
            for h in s.generators() {
                for g in &conj {
                    let c = x.conjugate(&h, g)?;
                    if !s.contains(x, &c)? {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return Ok(s);
            }
            s = s.join(x, &extra)?;
        }
    }

    pub fn normal_closure(x: &PcPresentation, gens: &[Element]) -> Result<Subgroup> {
        Subgroup::closure_under(x, gens, &Subgroup::whole(x))
    }

    /// `self ∩ other`. Uses the diagonal trick in `X x X` when either side is
    /// normal and enumeration in finite groups otherwise.
    pub fn intersection(&self, x: &PcPresentation, other: &Subgroup) -> Result<Subgroup> {
        if other.is_normal(x)? {
            return intersect_with_normal(x, self, other);
        }
        if self.is_normal(x)? {
            return intersect_with_normal(x, other, self);
        }
        if let (Some(a), Some(b)) = (self.order(x), other.order(x)) {
            let (small, big) = if a <= b { (self, other) } else { (other, self) };
            let mut gens = Vec::new();
            for e in small.elements(x)? {
                if big.contains(x, &e)? {
                    gens.push(e);
                }
            }
            return Subgroup::span(x, &gens);
        }
        Err(Error::InvalidArgument("intersection of two non-normal infinite subgroups is not supported".into()))
    }

    /// `X / N` with its projection. Generators of `X` whose layer is not
    /// absorbed by `N` survive, with relative order the leading exponent.
    pub fn quotient(&self, x: &PcPresentation) -> Result<(PcPresentation, Homomorphism)> {
        if !self.is_normal(x)? {
            return Err(Error::NotNormal);
        }
        let n = x.rank();
        let mut kept = Vec::new();
        let mut gens = Vec::new();
        for d in 0..n {
            let spec = &x.generators()[d];
            let order = match self.row_at(d) {
                Some(r) if r[d] == 1 => continue,
                Some(r) => RelativeOrder::Finite(r[d]),
                None => spec.order,
            };
            kept.push(d);
            gens.push(GeneratorSpec::new(spec.name.clone(), order, spec.weight));
        }
        let restrict = |e: &Element| -> Word {
            kept.iter().enumerate().filter(|(_, &d)| e.exponents()[d] != 0).map(|(k, &d)| (k, e.exponents()[d])).collect()
        };
        let mut powers = Vec::new();
        let mut conjugates = Vec::new();
        for (k, &d) in kept.iter().enumerate() {
            if let RelativeOrder::Finite(o) = gens[k].order {
                let p = x.power(&x.generator(d), o)?;
                powers.push((k, restrict(&self.coset_rep(x, &p)?)));
            }
            for (l, &e) in kept.iter().enumerate().skip(k + 1) {
                let c = x.conjugate(&x.generator(e), &x.generator(d))?;
                let w = restrict(&self.coset_rep(x, &c)?);
                if w != [(l, 1)] {
                    conjugates.push((l, k, w));
                }
            }
        }
        let q = PcPresentation::build(format!("{}/N", x.name()), gens, powers, conjugates, false)?;
        let images = (0..n)
            .map(|d| {
                let rep = self.coset_rep(x, &x.generator(d))?;
                q.normal_form(&restrict(&rep))
            })
            .collect::<Result<Vec<_>>>()?;
        let proj = Homomorphism::new(x.clone(), q.clone(), images)?;
        Ok((q, proj))
    }

    /// Image of the subgroup under the projection `X -> X/G_m`.
    pub fn truncate(&self, x: &PcPresentation, m: usize) -> Result<Subgroup> {
        let t = x.truncate(m);
        let gens: Vec<Element> = self.rows.iter().map(|r| Element::from_vec(r[..m].to_vec())).collect();
        Subgroup::span(&t, &gens)
    }

    /// Preimage under `X -> X/G_m` of a subgroup of the truncation.
    pub fn lift(x: &PcPresentation, sub: &Subgroup, m: usize) -> Result<Subgroup> {
        let n = x.rank();
        let mut gens: Vec<Element> = sub
            .rows
            .iter()
            .map(|r| {
                let mut v = r.clone();
                v.resize(n, 0);
                Element::from_vec(v)
            })
            .collect();
        gens.extend((m..n).map(|i| x.generator(i)));
        Subgroup::span(x, &gens)
    }
}

fn check_len(x: &PcPresentation, u: &Element) -> Result<()> {
    if u.len() != x.rank() {
        return Err(Error::InvalidArgument(format!("element of length {} in a group of rank {}", u.len(), x.rank())));
    }
    Ok(())
}

/// `H ∩ N` for `N` normal: in `X x X`, the span of `(h, h)` and `(n, 1)` meets
/// `1 x X` exactly in `1 x (H ∩ N)`.
fn intersect_with_normal(x: &PcPresentation, h: &Subgroup, nrm: &Subgroup) -> Result<Subgroup> {
    if h.is_trivial() || nrm.is_trivial() {
        return Ok(Subgroup::trivial(x));
    }
    let n = x.rank();
    let p = x.direct_product(x);
    let mut gens = Vec::new();
    for r in &h.rows {
        let mut v = r.clone();
        v.extend_from_slice(r);
        gens.push(Element::from_vec(v));
    }
    for r in &nrm.rows {
        let mut v = r.clone();
        v.resize(2 * n, 0);
        gens.push(Element::from_vec(v));
    }
    let d = Subgroup::span(&p, &gens)?;
    let tail: Vec<Element> = d.rows.iter().filter(|r| depth(r) >= n).map(|r| Element::from_vec(r[n..].to_vec())).collect();
    Subgroup::span(x, &tail)
}

/// Incremental induced-pcgs construction.
struct Sieve<'a> {
    x: &'a PcPresentation,
    slots: Vec<Option<Vec<Int>>>,
}

impl<'a> Sieve<'a> {
    fn new(x: &'a PcPresentation) -> Self {
        Sieve { x, slots: vec![None; x.rank()] }
    }

    /// Adds `v` to the generated subgroup; returns whether a slot changed.
    fn insert(&mut self, v: Vec<Int>) -> Result<bool> {
        let x = self.x;
        let mut changed = false;
        let mut todo = vec![v];
        while let Some(mut v) = todo.pop() {
            loop {
                let d = depth(&v);
                if d == v.len() {
                    break;
                }
                let l = v[d];
                match self.slots[d].take() {
                    None => {
                        let (row, rest) = self.normalize(d, v)?;
                        self.slots[d] = Some(row);
                        changed = true;
                        todo.extend(rest);
                        break;
                    }
                    Some(row) => {
                        let m = row[d];
                        if l % m == 0 {
                            v = x.mul_vec(&v, &x.pow_vec(&row, -(l / m))?)?;
                            self.slots[d] = Some(row);
                            continue;
                        }
                        // gcd-combine: v^s row^t has lead gcd(l, m)
                        let (_, s, t) = crate::primes::ext_gcd(l, m);
                        let comb = x.mul_vec(&x.pow_vec(&v, s)?, &x.pow_vec(&row, t)?)?;
                        let (new_row, rest) = self.normalize(d, comb)?;
                        self.slots[d] = Some(new_row);
                        changed = true;
                        todo.extend(rest);
                        todo.push(row);
                        // v itself still needs to be sifted
                    }
                }
            }
        }
        Ok(changed)
    }

    /// Makes the lead of `v` (depth `d`) positive and, on a finite layer,
    /// a divisor of the relative order. Returns the row and elements that
    /// must still be sifted so that the generated subgroup is unchanged.
    fn normalize(&self, d: usize, v: Vec<Int>) -> Result<(Vec<Int>, Vec<Vec<Int>>)> {
        let x = self.x;
        match x.relative_order(d) {
            RelativeOrder::Infinite => {
                if v[d] < 0 {
                    Ok((x.inv_vec(&v)?, Vec::new()))
                } else {
                    Ok((v, Vec::new()))
                }
            }
            RelativeOrder::Finite(r) => {
                let l = v[d];
                let g = gcd(l, r);
                let mut rest = Vec::new();
                // the layer power of v lies deeper and must be kept
                rest.push(x.pow_vec(&v, r / g)?);
                if l == g {
                    return Ok((v, rest));
                }
                let k = mod_inverse(l / g, r / g).expect("coprime after dividing by the gcd");
                let row = x.pow_vec(&v, k)?;
                rest.push(v);
                Ok((row, rest))
            }
        }
    }

    /// Closes the rows under commutators and layer powers.
    fn close(&mut self) -> Result<()> {
        let x = self.x;
        loop {
            let rows: Vec<Vec<Int>> = self.slots.iter().flatten().cloned().collect();
            let mut changed = false;
            for (i, a) in rows.iter().enumerate() {
                let d = depth(a);
                if let RelativeOrder::Finite(r) = x.relative_order(d) {
                    changed |= self.insert(x.pow_vec(a, r / a[d])?)?;
                }
                for b in rows.iter().skip(i + 1) {
                    let c = x.commutator(&Element::from_vec(b.clone()), &Element::from_vec(a.clone()))?;
                    changed |= self.insert(c.into_vec())?;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    /// Reduces every row at the depths of later rows into `[0, lead)`.
    fn finish(self) -> Result<Subgroup> {
        let x = self.x;
        let mut rows: Vec<Vec<Int>> = self.slots.into_iter().flatten().collect();
        for i in (0..rows.len()).rev() {
            let mut v = rows[i].clone();
            for r in rows.iter().skip(i + 1) {
                let d = depth(r);
                let q = v[d].div_euclid(r[d]);
                if q != 0 {
                    v = x.mul_vec(&v, &x.pow_vec(r, -q)?)?;
                }
            }
            rows[i] = v;
        }
        Ok(Subgroup { rank: x.rank(), rows })
    }
}
