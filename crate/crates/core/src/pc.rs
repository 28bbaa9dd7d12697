//! Consistent nilpotent polycyclic presentations and collection.
//!
//! A presentation lists generators `g_0, ..., g_{n-1}` with relative orders,
//! power relations `g_i^{r_i} = w_i` for finite `r_i` and conjugation
//! relations `g_j^{g_i} = g_i^{-1} g_j g_i = g_j t_{ij}` for `i < j`. Both kinds
//! of right-hand side only involve generators after the left-hand one, and a
//! conjugation tail `t_{ij}` only involves generators after `g_j`. The
//! subgroups `G_k = <g_k, ..., g_{n-1}>` then form a central series, so every
//! accepted presentation is nilpotent.
//!
//! Elements are stored as normal-form exponent vectors. Multiplication is
//! collection from the left: to form `u * g_k^e` the part of `u` below `g_k` is
//! conjugated past `g_k^e` with the automorphism "conjugate by `g_k`", and the
//! exponent of `g_k` is reduced with the power relation. Every recursive step
//! works strictly inside some `G_{k+1}`, so collection terminates.
//!
//! Commutators follow `[u, v] = u^-1 v^-1 u v`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Integer type for exponents and matrix entries. Arithmetic in collection is
/// checked and reports [`Error::Overflow`].
pub type Int = i128;

/// Letters `(generator index, exponent)` read left to right.
pub type Word = Vec<(usize, Int)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelativeOrder {
    Finite(Int),
    Infinite,
}

impl RelativeOrder {
    pub fn finite(self) -> Option<Int> {
        match self {
            RelativeOrder::Finite(r) => Some(r),
            RelativeOrder::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RelativeOrder::Infinite)
    }
}

impl fmt::Display for RelativeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelativeOrder::Finite(r) => write!(f, "{r}"),
            RelativeOrder::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub order: RelativeOrder,
    pub weight: u32,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, order: RelativeOrder, weight: u32) -> Self {
        GeneratorSpec { name: name.into(), order, weight }
    }

    pub fn infinite(name: impl Into<String>, weight: u32) -> Self {
        Self::new(name, RelativeOrder::Infinite, weight)
    }

    pub fn finite(name: impl Into<String>, order: Int, weight: u32) -> Self {
        Self::new(name, RelativeOrder::Finite(order), weight)
    }
}

/// Normal form of a group element: `g_0^{e_0} ... g_{n-1}^{e_{n-1}}` with
/// `0 <= e_i < r_i` for finite relative orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Vec<Int>);

impl Element {
    pub fn exponents(&self) -> &[Int] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Index of the first nonzero exponent, or `len()` for the identity.
    pub fn depth(&self) -> usize {
        self.0.iter().position(|&e| e != 0).unwrap_or(self.0.len())
    }

    /// Exponent at the depth (0 for the identity).
    pub fn leading_exponent(&self) -> Int {
        self.0.get(self.depth()).copied().unwrap_or(0)
    }

    pub(crate) fn from_vec(v: Vec<Int>) -> Self {
        Element(v)
    }

    pub(crate) fn into_vec(self) -> Vec<Int> {
        self.0
    }

    /// Letters of the normal form, skipping zero exponents.
    pub fn to_word(&self) -> Word {
        self.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    name: String,
    gens: Vec<GeneratorSpec>,
    /// `power[i]` = normal form of `g_i^{r_i}` for finite `r_i`.
    power: Vec<Option<Vec<Int>>>,
    /// `conj[i][j]` = normal form of `g_j^{g_i}`, meaningful for `j > i`.
    conj: Vec<Vec<Vec<Int>>>,
    /// `conj_inv[i][j]` = normal form of `g_j^{g_i^{-1}}`, derived.
    conj_inv: Vec<Vec<Vec<Int>>>,
}

impl PcPresentation {
    /// Builds and validates a presentation.
    ///
    /// `powers` holds `(i, w)` for `g_i^{r_i} = w`; `conjugates` holds
    /// `(j, i, w)` for `g_j^{g_i} = w` with `i < j`. Missing relations are
    /// trivial. Weights must be nondecreasing, conjugation tails may only use
    /// generators of larger weight and power words generators of weight at
    /// least that of the base. The standard overlap tests must pass.
    pub fn new(
        name: impl Into<String>,
        gens: Vec<GeneratorSpec>,
        powers: Vec<(usize, Word)>,
        conjugates: Vec<(usize, usize, Word)>,
    ) -> Result<Self> {
        Self::build(name.into(), gens, powers, conjugates, true)
    }

    pub(crate) fn build(
        name: String,
        gens: Vec<GeneratorSpec>,
        powers: Vec<(usize, Word)>,
        conjugates: Vec<(usize, usize, Word)>,
        check_weights: bool,
    ) -> Result<Self> {
        let n = gens.len();
        for (i, g) in gens.iter().enumerate() {
            if let RelativeOrder::Finite(r) = g.order {
                if r < 2 {
                    return Err(Error::InvalidPresentation(format!("generator {} has relative order {r} < 2", g.name)));
                }
            }
            if check_weights {
                if g.weight == 0 {
                    return Err(Error::InvalidPresentation(format!("generator {} has weight 0", g.name)));
                }
                if i > 0 && gens[i - 1].weight > g.weight {
                    return Err(Error::InvalidPresentation(format!("weights decrease at generator {}", g.name)));
                }
            }
            for (k, h) in gens.iter().enumerate().take(i) {
                if h.name == g.name {
                    return Err(Error::InvalidPresentation(format!("duplicate generator name {} at {k} and {i}", g.name)));
                }
            }
        }

        let mut power_words: Vec<Option<Word>> = vec![None; n];
        for (i, w) in powers {
            let g = gens.get(i).ok_or(Error::UnknownGenerator(i))?;
            if g.order.is_infinite() {
                return Err(Error::InvalidPresentation(format!("power relation for infinite generator {}", g.name)));
            }
            check_support(&w, i + 1, n, &gens[i].name)?;
            if power_words[i].replace(w).is_some() {
                return Err(Error::InvalidPresentation(format!("duplicate power relation for {}", g.name)));
            }
        }
        let mut conj_words: Vec<Vec<Option<Word>>> = vec![vec![None; n]; n];
        for (j, i, w) in conjugates {
            if j >= n {
                return Err(Error::UnknownGenerator(j));
            }
            if i >= j {
                return Err(Error::InvalidPresentation(format!(
                    "conjugation relation {}^{} must conjugate a later generator by an earlier one",
                    gens[j].name, gens[i].name
                )));
            }
            check_support(&w, i + 1, n, &gens[j].name)?;
            if conj_words[i][j].replace(w).is_some() {
                return Err(Error::InvalidPresentation(format!("duplicate conjugation relation {}^{}", gens[j].name, gens[i].name)));
            }
        }

        let mut pres = PcPresentation {
            name,
            gens,
            power: vec![None; n],
            conj: vec![vec![Vec::new(); n]; n],
            conj_inv: vec![vec![Vec::new(); n]; n],
        };
        // Fill relations bottom-up: level i only needs collection inside G_{i+1}.
        for i in (0..n).rev() {
            for j in i + 1..n {
                let img = match &conj_words[i][j] {
                    Some(w) => pres.collect_word(w)?,
                    None => unit(n, j),
                };
                if img[..j].iter().any(|&e| e != 0) || img[j] != 1 {
                    return Err(Error::NotNilpotent(format!(
                        "{}^{} is not {} times a word in later generators",
                        pres.gens[j].name, pres.gens[i].name, pres.gens[j].name
                    )));
                }
                if check_weights {
                    let wj = pres.gens[j].weight;
                    if let Some(k) = (j + 1..n).find(|&k| img[k] != 0 && pres.gens[k].weight <= wj) {
                        return Err(Error::NotNilpotent(format!(
                            "tail of {}^{} uses {} whose weight is not above that of {}",
                            pres.gens[j].name, pres.gens[i].name, pres.gens[k].name, pres.gens[j].name
                        )));
                    }
                }
                pres.conj[i][j] = img;
            }
            if let RelativeOrder::Finite(_) = pres.gens[i].order {
                let w = match &power_words[i] {
                    Some(w) => pres.collect_word(w)?,
                    None => vec![0; n],
                };
                if check_weights {
                    let wi = pres.gens[i].weight;
                    if let Some(k) = (i + 1..n).find(|&k| w[k] != 0 && pres.gens[k].weight < wi) {
                        return Err(Error::NotNilpotent(format!(
                            "power relation of {} uses lighter generator {}",
                            pres.gens[i].name, pres.gens[k].name
                        )));
                    }
                }
                pres.power[i] = Some(w);
            }
            // g_j^{g_i^{-1}} = g_j * phi^{-1}(t_j^{-1}) where phi(g_j) = g_j t_j
            for j in (i + 1..n).rev() {
                let mut t = pres.conj[i][j].clone();
                t[j] = 0;
                let t_inv = pres.inv_vec(&t)?;
                let pulled = pres.apply_images(&pres.conj_inv[i], j + 1, &t_inv)?;
                let mut img = pulled;
                img[j] = 1;
                pres.conj_inv[i][j] = img;
            }
        }
        pres.check_consistency()?;
        Ok(pres)
    }

    fn check_consistency(&self) -> Result<()> {
        let n = self.rank();
        let e = |i: usize| unit(n, i);
        let neg = |i: usize| {
            let mut v = vec![0; n];
            v[i] = -1;
            v
        };
        let fail = |what: String| Err(Error::Inconsistent(what));
        let name = |i: usize| self.gens[i].name.as_str();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let l = self.mul_vec(&self.mul_vec(&e(k), &e(j))?, &e(i))?;
                    let r = self.mul_vec(&e(k), &self.mul_vec(&e(j), &e(i))?)?;
                    if l != r {
                        return fail(format!("overlap {} {} {}", name(k), name(j), name(i)));
                    }
                }
            }
        }
        for i in 0..n {
            if let (RelativeOrder::Finite(r), Some(w)) = (self.gens[i].order, &self.power[i]) {
                let l = self.mul_vec(&e(i), w)?;
                let rr = self.mul_vec(w, &e(i))?;
                if l != rr {
                    return fail(format!("power relation of {} is not central in <{}>", name(i), name(i)));
                }
                let mut below = vec![0; n];
                below[i] = r - 1;
                for j in i + 1..n {
                    // g_j (g_i^{r_i}) = (g_j g_i) g_i^{r_i - 1}
                    let l = self.mul_vec(&e(j), w)?;
                    let rr = self.mul_vec(&self.mul_vec(&e(j), &e(i))?, &below)?;
                    if l != rr {
                        return fail(format!("overlap {} {}^{}", name(j), name(i), r));
                    }
                }
            }
            for j in i + 1..n {
                if let (RelativeOrder::Finite(r), Some(w)) = (self.gens[j].order, &self.power[j]) {
                    // (g_j^{r_j}) g_i = g_j^{r_j - 1} (g_j g_i)
                    let mut below = vec![0; n];
                    below[j] = r - 1;
                    let l = self.mul_vec(w, &e(i))?;
                    let rr = self.mul_vec(&below, &self.mul_vec(&e(j), &e(i))?)?;
                    if l != rr {
                        return fail(format!("overlap {}^{} {}", name(j), r, name(i)));
                    }
                }
                if self.gens[i].order.is_infinite() {
                    let l = self.mul_vec(&self.mul_vec(&e(j), &neg(i))?, &e(i))?;
                    if l != e(j) {
                        return fail(format!("overlap {} {}^-1 {}", name(j), name(i), name(i)));
                    }
                }
                if self.gens[j].order.is_infinite() {
                    let l = self.mul_vec(&neg(j), &self.mul_vec(&e(j), &e(i))?)?;
                    if l != e(i) {
                        return fail(format!("overlap {}^-1 {} {}", name(j), name(j), name(i)));
                    }
                    if self.gens[i].order.is_infinite() {
                        let l = self.mul_vec(&self.mul_vec(&neg(j), &neg(i))?, &e(i))?;
                        if l != neg(j) {
                            return fail(format!("overlap {}^-1 {}^-1 {}", name(j), name(i), name(i)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Number of pc generators.
    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    pub fn relative_order(&self, i: usize) -> RelativeOrder {
        self.gens[i].order
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Number of infinite relative orders.
    pub fn hirsch_length(&self) -> usize {
        self.gens.iter().filter(|g| g.order.is_infinite()).count()
    }

    /// Group order when every relative order is finite.
    pub fn order(&self) -> Option<Int> {
        self.gens.iter().try_fold(1 as Int, |acc, g| g.order.finite().and_then(|r| acc.checked_mul(r)))
    }

    pub fn is_finite(&self) -> bool {
        self.gens.iter().all(|g| !g.order.is_infinite())
    }

    /// Normal form of `g_i^{r_i}` for finite relative order.
    pub fn power_relation(&self, i: usize) -> Option<Element> {
        self.power[i].clone().map(Element)
    }

    /// Normal form of `g_j^{g_i}` for `i < j`.
    pub fn conjugation_relation(&self, j: usize, i: usize) -> Element {
        assert!(i < j);
        Element(self.conj[i][j].clone())
    }

    pub fn identity(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    pub fn generator(&self, i: usize) -> Element {
        Element(unit(self.rank(), i))
    }

    /// The normal form as a word `a^2 b^-1`, or `1` for the identity.
    pub fn format_element(&self, u: &Element) -> String {
        if u.is_identity() {
            return "1".into();
        }
        let parts: Vec<String> = u.to_word().iter().map(|&(i, e)| format!("{}^{}", self.gens[i].name, e)).collect();
        parts.join(" ")
    }

    /// Builds `prod g_i^{e_i}` from an arbitrary exponent vector.
    pub fn element(&self, exps: &[Int]) -> Result<Element> {
        if exps.len() != self.rank() {
            return Err(Error::InvalidArgument(format!("expected {} exponents, got {}", self.rank(), exps.len())));
        }
        let w: Word = exps.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e)).collect();
        self.normal_form(&w)
    }

    /// Checks that `exps` already is a normal form and wraps it.
    pub fn element_from_normal_form(&self, exps: Vec<Int>) -> Result<Element> {
        if exps.len() != self.rank() {
            return Err(Error::InvalidArgument(format!("expected {} exponents, got {}", self.rank(), exps.len())));
        }
        for (i, &e) in exps.iter().enumerate() {
            if let RelativeOrder::Finite(r) = self.gens[i].order {
                if !(0..r).contains(&e) {
                    return Err(Error::InvalidArgument(format!("exponent {e} of {} out of range", self.gens[i].name)));
                }
            }
        }
        Ok(Element(exps))
    }

    /// Collects a word into its normal form.
    pub fn normal_form(&self, word: &[(usize, Int)]) -> Result<Element> {
        self.collect_word(word).map(Element)
    }

    pub fn multiply(&self, u: &Element, v: &Element) -> Result<Element> {
        self.mul_vec(&u.0, &v.0).map(Element)
    }

    pub fn inverse(&self, u: &Element) -> Result<Element> {
        self.inv_vec(&u.0).map(Element)
    }

    pub fn power(&self, u: &Element, k: Int) -> Result<Element> {
        self.pow_vec(&u.0, k).map(Element)
    }

    /// `[u, v] = u^-1 v^-1 u v`.
    pub fn commutator(&self, u: &Element, v: &Element) -> Result<Element> {
        let uv = self.mul_vec(&u.0, &v.0)?;
        let vu = self.mul_vec(&v.0, &u.0)?;
        let vu_inv = self.inv_vec(&vu)?;
        self.mul_vec(&vu_inv, &uv).map(Element)
    }

    /// `u^v = v^-1 u v`.
    pub fn conjugate(&self, u: &Element, v: &Element) -> Result<Element> {
        let vi = self.inv_vec(&v.0)?;
        self.mul_vec(&self.mul_vec(&vi, &u.0)?, &v.0).map(Element)
    }

    /// Order of an element, `None` when infinite.
    pub fn element_order(&self, u: &Element) -> Result<Option<Int>> {
        let mut x = u.clone();
        let mut order: Int = 1;
        // walk down the series: the leading exponent's order in its layer
        while !x.is_identity() {
            let d = x.depth();
            let r = match self.gens[d].order {
                RelativeOrder::Infinite => return Ok(None),
                RelativeOrder::Finite(r) => r,
            };
            let k = r / crate::primes::gcd(x.0[d], r);
            x = self.power(&x, k)?;
            order = order.checked_mul(k).ok_or(Error::Overflow)?;
        }
        Ok(Some(order))
    }

    /// Quotient by `G_m`: the first `m` generators with projected relations.
    pub fn truncate(&self, m: usize) -> PcPresentation {
        assert!(m <= self.rank());
        let cut = |v: &Vec<Int>| if v.is_empty() { Vec::new() } else { v[..m].to_vec() };
        PcPresentation {
            name: self.name.clone(),
            gens: self.gens[..m].to_vec(),
            power: self.power[..m].iter().map(|p| p.as_ref().map(cut)).collect(),
            conj: self.conj[..m].iter().map(|row| row[..m].iter().map(cut).collect()).collect(),
            conj_inv: self.conj_inv[..m].iter().map(|row| row[..m].iter().map(cut).collect()).collect(),
        }
    }

    /// Direct product `self x other`, generators of `self` first.
    pub fn direct_product(&self, other: &PcPresentation) -> PcPresentation {
        let (n, m) = (self.rank(), other.rank());
        let t = n + m;
        let left = |v: &Vec<Int>| {
            let mut w = v.clone();
            w.resize(t, 0);
            w
        };
        let right = |v: &Vec<Int>| {
            let mut w = vec![0; n];
            w.extend_from_slice(v);
            w
        };
        let mut conj = vec![vec![Vec::new(); t]; t];
        let mut conj_inv = vec![vec![Vec::new(); t]; t];
        for i in 0..t {
            for j in i + 1..t {
                let (c, ci) = if j < n {
                    (left(&self.conj[i][j]), left(&self.conj_inv[i][j]))
                } else if i >= n {
                    (right(&other.conj[i - n][j - n]), right(&other.conj_inv[i - n][j - n]))
                } else {
                    (unit(t, j), unit(t, j))
                };
                conj[i][j] = c;
                conj_inv[i][j] = ci;
            }
        }
        let mut power: Vec<Option<Vec<Int>>> = self.power.iter().map(|p| p.as_ref().map(left)).collect();
        power.extend(other.power.iter().map(|p| p.as_ref().map(right)));
        let mut gens = self.gens.clone();
        let taken: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
        for g in &other.gens {
            let mut g = g.clone();
            while taken.contains(&g.name) {
                g.name.push('\'');
            }
            gens.push(g);
        }
        PcPresentation { name: format!("{}x{}", self.name, other.name), gens, power, conj, conj_inv }
    }

    /// Enumerates all normal forms of a finite presentation in lexicographic order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        let order = self.order().ok_or(Error::InfiniteGroup)?;
        let mut out = Vec::with_capacity(order as usize);
        let n = self.rank();
        let mut cur = vec![0; n];
        loop {
            out.push(Element(cur.clone()));
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.gens[i].order.finite().unwrap() {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    // ---- collection ----

    pub(crate) fn collect_word(&self, word: &[(usize, Int)]) -> Result<Vec<Int>> {
        let n = self.rank();
        let mut u = vec![0; n];
        for &(g, e) in word {
            if g >= n {
                return Err(Error::UnknownGenerator(g));
            }
            self.mul_gen_pow(&mut u, g, e)?;
        }
        Ok(u)
    }

    pub(crate) fn mul_vec(&self, u: &[Int], v: &[Int]) -> Result<Vec<Int>> {
        let last_u = u.iter().rposition(|&e| e != 0);
        let first_v = v.iter().position(|&e| e != 0);
        match (last_u, first_v) {
            (_, None) => return Ok(u.to_vec()),
            (None, _) => return Ok(v.to_vec()),
            (Some(a), Some(b)) if a < b => {
                let mut w = u.to_vec();
                w[b..].copy_from_slice(&v[b..]);
                return Ok(w);
            }
            _ => {}
        }
        let mut r = u.to_vec();
        for (k, &e) in v.iter().enumerate() {
            if e != 0 {
                self.mul_gen_pow(&mut r, k, e)?;
            }
        }
        Ok(r)
    }

    pub(crate) fn inv_vec(&self, u: &[Int]) -> Result<Vec<Int>> {
        let mut r = vec![0; u.len()];
        for k in (0..u.len()).rev() {
            if u[k] != 0 {
                self.mul_gen_pow(&mut r, k, -u[k])?;
            }
        }
        Ok(r)
    }

    pub(crate) fn pow_vec(&self, u: &[Int], k: Int) -> Result<Vec<Int>> {
        let n = u.len();
        if k == 0 || u.iter().all(|&e| e == 0) {
            return Ok(vec![0; n]);
        }
        // a single generator power is collected directly
        let support: Vec<usize> = (0..n).filter(|&i| u[i] != 0).collect();
        if support.len() == 1 {
            let i = support[0];
            let mut r = vec![0; n];
            self.mul_gen_pow(&mut r, i, u[i].checked_mul(k).ok_or(Error::Overflow)?)?;
            return Ok(r);
        }
        let mut base = if k < 0 { self.inv_vec(u)? } else { u.to_vec() };
        let mut k = k.unsigned_abs();
        let mut acc = vec![0; n];
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_vec(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul_vec(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `u <- u * g_k^e`.
    fn mul_gen_pow(&self, u: &mut [Int], k: usize, e: Int) -> Result<()> {
        if e == 0 {
            return Ok(());
        }
        let n = u.len();
        let mut below = vec![0; n];
        below[k + 1..].copy_from_slice(&u[k + 1..]);
        let moved = if below.iter().any(|&x| x != 0) { self.conj_pow(&below, k, e)? } else { below };
        let t = u[k].checked_add(e).ok_or(Error::Overflow)?;
        let (s, q) = match self.gens[k].order {
            RelativeOrder::Finite(r) => (t.rem_euclid(r), t.div_euclid(r)),
            RelativeOrder::Infinite => (t, 0),
        };
        let rest = if q != 0 {
            let w = self.power[k].as_ref().expect("finite generator has a power relation");
            let wq = self.pow_vec(w, q)?;
            self.mul_vec(&wq, &moved)?
        } else {
            moved
        };
        u[k] = s;
        u[k + 1..].copy_from_slice(&rest[k + 1..]);
        Ok(())
    }

    /// Applies "conjugate by `g_k^e`" to `x`, which lies in `G_{k+1}`.
    fn conj_pow(&self, x: &[Int], k: usize, e: Int) -> Result<Vec<Int>> {
        let table = if e > 0 { &self.conj[k] } else { &self.conj_inv[k] };
        let mut steps = e.unsigned_abs();
        if steps <= 8 {
            let mut y = x.to_vec();
            for _ in 0..steps {
                y = self.apply_images(table, k + 1, &y)?;
            }
            return Ok(y);
        }
        // square the automorphism on generator images
        let n = x.len();
        let mut base: Vec<Vec<Int>> = table.clone();
        let mut acc: Vec<Vec<Int>> = (0..n).map(|j| unit(n, j)).collect();
        while steps > 0 {
            if steps & 1 == 1 {
                acc = self.compose_images(&base, &acc, k + 1)?;
            }
            steps >>= 1;
            if steps > 0 {
                base = self.compose_images(&base, &base, k + 1)?;
            }
        }
        self.apply_images(&acc, k + 1, x)
    }

    /// Images of `alpha . beta` on generators `from..n`.
    fn compose_images(&self, alpha: &[Vec<Int>], beta: &[Vec<Int>], from: usize) -> Result<Vec<Vec<Int>>> {
        let n = self.rank();
        let mut out: Vec<Vec<Int>> = (0..n).map(|j| unit(n, j)).collect();
        for j in from..n {
            out[j] = self.apply_images(alpha, from, &beta[j])?;
        }
        Ok(out)
    }

    /// Evaluates `prod images[j]^{x_j}` for `x` supported on `from..n`.
    pub(crate) fn apply_images(&self, images: &[Vec<Int>], from: usize, x: &[Int]) -> Result<Vec<Int>> {
        let mut r = vec![0; x.len()];
        for j in from..x.len() {
            if x[j] != 0 {
                let p = self.pow_vec(&images[j], x[j])?;
                r = self.mul_vec(&r, &p)?;
            }
        }
        Ok(r)
    }
}

fn unit(n: usize, i: usize) -> Vec<Int> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn check_support(w: &[(usize, Int)], from: usize, n: usize, lhs: &str) -> Result<()> {
    for &(g, _) in w {
        if g >= n {
            return Err(Error::UnknownGenerator(g));
        }
        if g < from {
            return Err(Error::InvalidPresentation(format!("relation for {lhs} uses a generator that is not later in the sequence")));
        }
    }
    Ok(())
}

/// Small presentations used throughout tests and examples.
pub mod fixtures {
    use super::*;

    /// `Z` on one generator `a`.
    pub fn integers() -> PcPresentation {
        free_abelian(1)
    }

    /// `Z^r` on generators `a, b, ...` (then `x0, x1, ...`).
    pub fn free_abelian(r: usize) -> PcPresentation {
        let gens = (0..r).map(|i| GeneratorSpec::infinite(letter(i), 1)).collect();
        PcPresentation::new(format!("Z{r}"), gens, Vec::new(), Vec::new()).expect("free abelian")
    }

    /// Cyclic group of order `n >= 2` on one generator.
    pub fn cyclic(n: Int) -> PcPresentation {
        PcPresentation::new(format!("C{n}"), vec![GeneratorSpec::finite("a", n, 1)], Vec::new(), Vec::new()).expect("cyclic")
    }

    /// Direct product of cyclic factors (0 = infinite), one generator each.
    pub fn abelian(orders: &[Int]) -> PcPresentation {
        let gens = orders
            .iter()
            .enumerate()
            .map(|(i, &o)| {
                if o == 0 {
                    GeneratorSpec::infinite(letter(i), 1)
                } else {
                    GeneratorSpec::finite(letter(i), o, 1)
                }
            })
            .collect();
        let name = orders.iter().map(|o| format!("{o}")).collect::<Vec<_>>().join("x");
        PcPresentation::new(format!("A{name}"), gens, Vec::new(), Vec::new()).expect("abelian")
    }

    /// Heisenberg group `<a, b, c | [b, a] = c, c central>`.
    pub fn heisenberg() -> PcPresentation {
        PcPresentation::new(
            "H",
            vec![GeneratorSpec::infinite("a", 1), GeneratorSpec::infinite("b", 1), GeneratorSpec::infinite("c", 2)],
            Vec::new(),
            vec![(1, 0, vec![(1, 1), (2, 1)])],
        )
        .expect("heisenberg")
    }

    /// Heisenberg group modulo `m`: `a, b, c` of order `m`, `[b, a] = c`.
    ///
    /// This is the group of unitriangular 3x3 matrices over `Z/m`; for `m = 2`
    /// it is the dihedral group of order 8.
    pub fn heisenberg_mod(m: Int) -> PcPresentation {
        PcPresentation::new(
            format!("Hmod{m}"),
            vec![GeneratorSpec::finite("a", m, 1), GeneratorSpec::finite("b", m, 1), GeneratorSpec::finite("c", m, 2)],
            Vec::new(),
            vec![(1, 0, vec![(1, 1), (2, 1)])],
        )
        .expect("heisenberg mod m")
    }

    fn letter(i: usize) -> String {
        const L: &[u8] = b"abcdefgh";
        if i < L.len() {
            String::from(L[i] as char)
        } else {
            format!("x{i}")
        }
    }
}
