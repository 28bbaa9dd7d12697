//! Residual verdicts for HNN extensions, amalgamated products and graphs of
//! groups built from nilpotent groups given by pc presentations.
//!
//! Each check reports a [`Verdict`] made of labelled conditions. A failed
//! necessary condition gives [`Outcome::No`], certified conditions give
//! [`Outcome::Yes`], and anything a bounded search could not settle leaves the
//! outcome [`Outcome::Unknown`] with the bounds that ran out.
//!
//! Whenever a base group fails to be residually a `P`-group the answer is No:
//! the base group is a subgroup of the constructed group.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::hom::{Homomorphism, SubgroupMap};
use crate::isolator::{isolator, root_witness, torsion_isolator, torsion_subgroup};
use crate::pc::{Element, Int, PcPresentation};
use crate::primes::{factorize, PrimeSet};
use crate::subgroup::{Index, Subgroup};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub label: String,
    pub status: Status,
    pub evidence: String,
}

impl Condition {
    fn new(label: impl Into<String>, status: Status, evidence: impl Into<String>) -> Self {
        Condition { label: label.into(), status, evidence: evidence.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
    /// The bounds or hypotheses that left the question open.
    Unknown(String),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Yes => f.write_str("yes"),
            Outcome::No => f.write_str("no"),
            Outcome::Unknown(_) => f.write_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub conditions: Vec<Condition>,
}

impl Verdict {
    /// No if any condition failed, Yes if all passed.
    pub fn from_conditions(conditions: Vec<Condition>) -> Verdict {
        let outcome = if conditions.iter().any(|c| c.status == Status::Fail) {
            Outcome::No
        } else if conditions.iter().all(|c| c.status == Status::Pass) {
            Outcome::Yes
        } else {
            let open: Vec<String> = conditions
                .iter()
                .filter(|c| c.status == Status::Unknown)
                .map(|c| format!("{}: {}", c.label, c.evidence))
                .collect();
            Outcome::Unknown(open.join("; "))
        };
        Verdict { outcome, conditions }
    }

    pub fn is_yes(&self) -> bool {
        self.outcome == Outcome::Yes
    }

    pub fn is_no(&self) -> bool {
        self.outcome == Outcome::No
    }
}

/// Limits for the searches behind the criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriteriaBounds {
    /// Largest `k` for the verbal members `H^{p^k}`.
    pub kmax: u32,
    /// Largest index of the invariant subgroups enumerated directly.
    pub imax: Int,
    /// Primes tried beyond those dividing torsion.
    pub pmax: u64,
    /// Length of the descending chain before giving up.
    pub chain_cap: usize,
    /// Largest automorphism order computed by iteration.
    pub order_cap: Int,
}

impl Default for CriteriaBounds {
    fn default() -> Self {
        CriteriaBounds { kmax: 16, imax: 64, pmax: 50, chain_cap: 32, order_cap: 1000 }
    }
}

/// Automorphism groups are closed by breadth-first search up to this size.
const AUT_CLOSURE_LIMIT: usize = 10_000;

fn hypothesis(m: impl Into<String>) -> Error {
    Error::HypothesisFailed(m.into())
}

pub(crate) fn format_subgroup(x: &PcPresentation, s: &Subgroup) -> String {
    let gens: Vec<String> = s.generators().iter().map(|g| x.format_element(g)).collect();
    format!("<{}>", gens.join(", "))
}

fn is_central(x: &PcPresentation, s: &Subgroup) -> Result<bool> {
    for h in s.generators() {
        for i in 0..x.rank() {
            if !x.commutator(&h, &x.generator(i))?.is_identity() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn residual_condition(label: &str, x: &PcPresentation, primes: &PrimeSet) -> Result<Condition> {
    let t = torsion_isolator(x, primes)?;
    let label = format!("{label} residually a {primes}-group");
    match t.generators().first() {
        None => Ok(Condition::new(label, Status::Pass, "no torsion outside the prime set")),
        Some(g) => {
            let o = x.element_order(g)?.expect("torsion element");
            Ok(Condition::new(label, Status::Fail, format!("{} has order {o}", x.format_element(g))))
        }
    }
}

fn isolation_condition(label: String, x: &PcPresentation, s: &Subgroup, primes: &PrimeSet) -> Result<Condition> {
    let iso = isolator(x, s, primes)?;
    if &iso == s {
        return Ok(Condition::new(label, Status::Pass, format!("{} equals its isolator", format_subgroup(x, s))));
    }
    for g in iso.generators() {
        if !s.contains(x, &g)? {
            let w = root_witness(x, s, &g, primes)?.expect("isolator member has a root witness");
            let ev = format!("({})^{} = {} lies in {}", x.format_element(&g), w.q, x.format_element(&w.power), format_subgroup(x, s));
            return Ok(Condition::new(label, Status::Fail, ev));
        }
    }
    unreachable!("isolator strictly contains the subgroup")
}

/// Order of an automorphism of the abelian subgroup `a`, acting on `a / n`,
/// found by iteration up to `cap`.
fn induced_order(
    x: &PcPresentation,
    a: &Subgroup,
    n: &Subgroup,
    phi: &dyn Fn(&Element) -> Result<Element>,
    cap: Int,
) -> Result<Option<Int>> {
    let gens = a.generators();
    let mut imgs = gens.clone();
    for j in 1..=cap {
        let next: Result<Vec<Element>> = imgs.iter().map(|u| n.sift(x, &phi(u)?)).collect();
        imgs = match next {
            Ok(v) => v,
            Err(Error::Overflow) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut fixed = true;
        for (u, g) in imgs.iter().zip(&gens) {
            if !n.contains(x, &x.multiply(u, &x.inverse(g)?)?)? {
                fixed = false;
                break;
            }
        }
        if fixed {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// Every subgroup of the finite subgroup `a`, or `None` when `a` is too big.
fn all_subgroups(x: &PcPresentation, a: &Subgroup, limit: Int) -> Result<Option<Vec<Subgroup>>> {
    match a.order(x) {
        Some(o) if o <= limit => {}
        _ => return Ok(None),
    }
    let elements = a.elements(x)?;
    let mut seen: BTreeSet<Vec<Vec<Int>>> = BTreeSet::new();
    let mut queue = vec![Subgroup::trivial(x)];
    seen.insert(Vec::new());
    let mut out = Vec::new();
    while let Some(s) = queue.pop() {
        for g in &elements {
            if s.contains(x, g)? {
                continue;
            }
            let t = s.join(x, core::slice::from_ref(g))?;
            if seen.insert(t.rows().to_vec()) {
                queue.push(t);
            }
        }
        out.push(s);
    }
    Ok(Some(out))
}

/// Condition "the members `N` of `Omega` intersect trivially", where `Omega`
/// consists of the `phi`-invariant `N <= a` with `a / N` a finite `P`-group on
/// which `phi` induces an automorphism of `P`-number order. `a` must be a
/// central subgroup and `phi` an automorphism of it.
pub(crate) fn omega_condition(
    x: &PcPresentation,
    a: &Subgroup,
    phi: &dyn Fn(&Element) -> Result<Element>,
    primes: &PrimeSet,
    bounds: &CriteriaBounds,
) -> Result<Condition> {
    let label = "invariant P-quotients intersect trivially";
    let name = format_subgroup(x, a);
    if a.is_trivial() {
        return Ok(Condition::new(label, Status::Pass, "the subgroup is trivial"));
    }
    // P'-torsion survives in every member
    let torsion = torsion_subgroup(x)?.intersection(x, a)?;
    let tprimes: Vec<u64> = match torsion.order(x) {
        Some(o) => factorize(o).into_iter().map(|(p, _)| p as u64).collect(),
        None => return Err(Error::Inconsistent("torsion subgroup is infinite".into())),
    };
    if tprimes.iter().any(|&p| !primes.contains(p)) {
        let bad = isolator(x, &Subgroup::trivial(x), primes)?.intersection(x, a)?;
        let g = bad.generators().into_iter().next().expect("nontrivial torsion outside the prime set");
        let ev = format!("{} has order prime to the prime set and lies in every member", x.format_element(&g));
        return Ok(Condition::new(label, Status::Fail, ev));
    }
    let trivial = Subgroup::trivial(x);
    if let Some(d) = induced_order(x, a, &trivial, phi, bounds.order_cap)? {
        // the induced order divides d and is a P-number, so it divides d_P
        let dp = primes.p_part(d);
        for g in a.generators() {
            let mut u = g.clone();
            for _ in 0..dp {
                u = phi(&u)?;
            }
            let w = x.multiply(&u, &x.inverse(&g)?)?;
            if !w.is_identity() {
                let ev = format!(
                    "the automorphism has order {d} on {name}, so every member contains {}",
                    x.format_element(&w)
                );
                return Ok(Condition::new(label, Status::Fail, ev));
            }
        }
        let ev = format!(
            "the automorphism has order {d} on {name}; the members {name}^(p^k) for p in {primes} meet trivially"
        );
        return Ok(Condition::new(label, Status::Pass, ev));
    }
    // phi has large or infinite order: for p in P the order on a / a^{p^k} is
    // a P-number for every k exactly when it is one on a / a^p
    let mut candidates: Vec<u64> = tprimes.clone();
    candidates.extend(primes.members_up_to(bounds.pmax).into_iter().filter(|p| !tprimes.contains(p)));
    let mut good = Vec::new();
    for p in candidates {
        let powers = a.generators().iter().map(|g| x.power(g, p as Int)).collect::<Result<Vec<_>>>()?;
        let n = Subgroup::span(x, &powers)?;
        if let Some(o) = induced_order(x, a, &n, phi, bounds.order_cap)? {
            if primes.is_p_number(o) {
                good.push(p);
            }
        }
    }
    let infinite = a.order(x).is_none();
    if tprimes.iter().all(|p| good.contains(p)) && (!infinite || !good.is_empty()) {
        let list: Vec<String> = good.iter().map(|p| format!("{p}")).collect();
        let ev = format!("the members {name}^(p^k) for p in {{{}}} and all k meet trivially", list.join(","));
        return Ok(Condition::new(label, Status::Pass, ev));
    }
    if let Some(subs) = all_subgroups(x, a, bounds.imax)? {
        let mut meet = a.clone();
        let mut count = 0;
        for n in subs {
            let idx = a.relative_index(x, &n)?.finite().expect("finite subgroup");
            if !primes.is_p_number(idx) {
                continue;
            }
            let invariant = n.generators().iter().map(phi).collect::<Result<Vec<_>>>()?;
            if !Subgroup::span(x, &invariant)?.is_subgroup_of(x, &n)? {
                continue;
            }
            match induced_order(x, a, &n, phi, bounds.order_cap)? {
                Some(o) if primes.is_p_number(o) => {}
                _ => continue,
            }
            meet = meet.intersection(x, &n)?;
            count += 1;
        }
        let status = if meet.is_trivial() { Status::Pass } else { Status::Fail };
        let ev = format!("all {count} members enumerated; they meet in {}", format_subgroup(x, &meet));
        return Ok(Condition::new(label, status, ev));
    }
    let ev = format!(
        "automorphism order beyond {}, no verbal certificate for primes up to {} and k <= {}, index bound {}",
        bounds.order_cap, bounds.pmax, bounds.kmax, bounds.imax
    );
    Ok(Condition::new(label, Status::Unknown, ev))
}

/// `G*` with stable letter conjugating `<h>` to `<k>`, `h -> k`.
#[derive(Clone, Debug)]
pub struct HnnCyclicInstance {
    pub group: PcPresentation,
    pub h: Element,
    pub k: Element,
    pub primes: PrimeSet,
}

pub fn check_hnn_cyclic(inst: &HnnCyclicInstance) -> Result<Verdict> {
    let x = &inst.group;
    let primes = &inst.primes;
    for (name, e) in [("h", &inst.h), ("k", &inst.k)] {
        if e.len() != x.rank() {
            return Err(Error::InvalidArgument(format!("{name} has the wrong length")));
        }
        if x.element_order(e)?.is_some() {
            return Err(hypothesis(format!("{name} = {} does not have infinite order", x.format_element(e))));
        }
    }
    let h = Subgroup::span(x, core::slice::from_ref(&inst.h))?;
    let k = Subgroup::span(x, core::slice::from_ref(&inst.k))?;
    for (name, s) in [("<h>", &h), ("<k>", &k)] {
        if !is_central(x, s)? {
            return Err(hypothesis(format!("{name} is not central")));
        }
        if s == &Subgroup::whole(x) {
            return Err(hypothesis(format!("{name} is the whole group")));
        }
    }
    let mut conds = vec![residual_condition("G", x, primes)?];

    let d = h.intersection(x, &k)?;
    let ih = h.relative_index(x, &d)?;
    let ik = k.relative_index(x, &d)?;
    let status = if ih == ik { Status::Pass } else { Status::Fail };
    conds.push(Condition::new(
        "equal indices of H and K over their intersection",
        status,
        format!("|H : H∩K| = {ih}, |K : H∩K| = {ik}"),
    ));

    conds.push(isolation_condition("H isolated".into(), x, &h, primes)?);
    conds.push(isolation_condition("K isolated".into(), x, &k, primes)?);

    let label = "2 in P or H∩K central in G*";
    let c3 = match ih {
        Index::Infinite => Condition::new(label, Status::Pass, "H∩K is trivial"),
        Index::Finite(s) => {
            let hs = x.power(&inst.h, s)?;
            let ks = x.power(&inst.k, s)?;
            if hs == ks {
                Condition::new(label, Status::Pass, format!("the map fixes the generator {} of H∩K", x.format_element(&hs)))
            } else if primes.contains(2) {
                Condition::new(label, Status::Pass, "2 is in the prime set")
            } else {
                let ev = format!("h^{s} = {} maps to {} and 2 is not in the prime set", x.format_element(&hs), x.format_element(&ks));
                Condition::new(label, Status::Fail, ev)
            }
        }
    };
    conds.push(c3);
    Ok(Verdict::from_conditions(conds))
}

/// `G*` with stable letter conjugating central `H` onto central `K` by `phi`.
#[derive(Clone, Debug)]
pub struct HnnChainInstance {
    pub group: PcPresentation,
    pub h: Subgroup,
    pub k: Subgroup,
    pub phi: SubgroupMap,
    pub primes: PrimeSet,
}

impl HnnChainInstance {
    /// `phi` sends `h_gens[i]` to `images[i]`; it must be an isomorphism
    /// of `<h_gens>` onto `<k_gens>`, both central and proper.
    pub fn new(
        group: PcPresentation,
        h_gens: Vec<Element>,
        k_gens: Vec<Element>,
        images: Vec<Element>,
        primes: PrimeSet,
    ) -> Result<Self> {
        let h = Subgroup::span(&group, &h_gens)?;
        let k = Subgroup::span(&group, &k_gens)?;
        let phi = SubgroupMap::new(&group, &group, h_gens, images)?;
        if phi.image()? != k {
            return Err(hypothesis("the map does not send H onto K"));
        }
        if !phi.is_injective()? {
            return Err(hypothesis("the map is not injective on H"));
        }
        for (name, s) in [("H", &h), ("K", &k)] {
            if !is_central(&group, s)? {
                return Err(hypothesis(format!("{name} is not central")));
            }
            if s == &Subgroup::whole(&group) {
                return Err(hypothesis(format!("{name} is the whole group")));
            }
        }
        Ok(HnnChainInstance { group, h, k, phi, primes })
    }
}

/// The chain `H_{i+1} = H_i ∩ K_i`, `K_{i+1} = phi(H_{i+1})` up to the first
/// `n` with `H_n = H_{n+1}`; `terms[i]` is `(H_{i+1}, K_{i+1})`.
#[derive(Clone, Debug)]
pub struct Chain {
    pub stable_at: usize,
    pub terms: Vec<(Subgroup, Subgroup)>,
}

pub fn chain(inst: &HnnChainInstance, cap: usize) -> Result<Chain> {
    let x = &inst.group;
    let mut terms = vec![(inst.h.clone(), inst.k.clone())];
    loop {
        let (h, k) = terms.last().expect("nonempty");
        let next = h.intersection(x, k)?;
        if &next == h {
            return Ok(Chain { stable_at: terms.len(), terms });
        }
        if terms.len() >= cap {
            return Err(Error::SearchExhausted(format!("chain still descending after {cap} terms")));
        }
        let kn = inst.phi.image_of(&next)?;
        terms.push((next, kn));
    }
}

pub fn check_hnn_chain(inst: &HnnChainInstance, bounds: &CriteriaBounds) -> Result<Verdict> {
    let x = &inst.group;
    let primes = &inst.primes;
    let mut conds = vec![residual_condition("G", x, primes)?];
    let label = "chain stabilizes with H_n = K_n";
    let stable = match chain(inst, bounds.chain_cap) {
        Ok(c) => {
            let (hn, kn) = c.terms.last().expect("nonempty").clone();
            let n = c.stable_at;
            if hn == kn {
                conds.push(Condition::new(label, Status::Pass, format!("H_{n} = K_{n} = {}", format_subgroup(x, &hn))));
                Some(hn)
            } else {
                // once H_n <= K_n the chain is constant
                let ev = format!("H_{n} = {} differs from K_{n} = {} and the chain is constant from there", format_subgroup(x, &hn), format_subgroup(x, &kn));
                conds.push(Condition::new(label, Status::Fail, ev));
                None
            }
        }
        Err(Error::SearchExhausted(m)) => {
            conds.push(Condition::new(label, Status::Unknown, m));
            None
        }
        Err(Error::Overflow) => {
            conds.push(Condition::new(label, Status::Unknown, "exponents overflowed while descending"));
            None
        }
        Err(e) => return Err(e),
    };
    conds.push(isolation_condition("H isolated".into(), x, &inst.h, primes)?);
    conds.push(isolation_condition("K isolated".into(), x, &inst.k, primes)?);
    match stable {
        Some(hn) => {
            let phi = |e: &Element| inst.phi.apply(e);
            conds.push(omega_condition(x, &hn, &phi, primes, bounds)?);
        }
        None => conds.push(Condition::new(
            "invariant P-quotients intersect trivially",
            Status::Unknown,
            "needs a stable chain with H_n = K_n",
        )),
    }
    Ok(Verdict::from_conditions(conds))
}

/// The split extension of an abelian group `y` by the automorphism with
/// generator images `images`.
pub fn check_split_by_z(y: &PcPresentation, images: Vec<Element>, primes: &PrimeSet, bounds: &CriteriaBounds) -> Result<Verdict> {
    let whole = Subgroup::whole(y);
    if !is_central(y, &whole)? {
        return Err(hypothesis("the base group is not abelian"));
    }
    let phi = Homomorphism::new(y.clone(), y.clone(), images)?;
    if !phi.kernel()?.is_trivial() || phi.image()? != whole {
        return Err(hypothesis("the map is not an automorphism"));
    }
    let conds = vec![
        residual_condition("Y", y, primes)?,
        omega_condition(y, &whole, &|e: &Element| phi.apply(e), primes, bounds)?,
    ];
    Ok(Verdict::from_conditions(conds))
}

/// `A *_U B`, with `U` given by generators in `A` and their counterparts in
/// `B`.
#[derive(Clone, Debug)]
pub struct AmalgamInstance {
    pub a: PcPresentation,
    pub b: PcPresentation,
    pub u_in_a: Subgroup,
    pub u_in_b: Subgroup,
    pub identification: SubgroupMap,
    /// An endomorphism of `B` onto `U` fixing `U`.
    pub retraction: Option<Homomorphism>,
    pub primes: PrimeSet,
}

impl AmalgamInstance {
    pub fn new(
        a: PcPresentation,
        b: PcPresentation,
        u_gens_a: Vec<Element>,
        u_gens_b: Vec<Element>,
        retraction: Option<Vec<Element>>,
        primes: PrimeSet,
    ) -> Result<Self> {
        let u_in_a = Subgroup::span(&a, &u_gens_a)?;
        let u_in_b = Subgroup::span(&b, &u_gens_b)?;
        let identification = SubgroupMap::new(&a, &b, u_gens_a, u_gens_b)?;
        if !identification.is_injective()? {
            return Err(hypothesis("the identification of U is not injective"));
        }
        if u_in_a == Subgroup::whole(&a) || u_in_b == Subgroup::whole(&b) {
            return Err(hypothesis("U must be proper in both factors"));
        }
        let retraction = match retraction {
            None => None,
            Some(images) => {
                let r = Homomorphism::new(b.clone(), b.clone(), images)?;
                if r.image()? != u_in_b {
                    return Err(hypothesis("the retraction does not map B onto U"));
                }
                for g in u_in_b.generators() {
                    if r.apply(&g)? != g {
                        return Err(hypothesis(format!("the retraction moves {}", b.format_element(&g))));
                    }
                }
                Some(r)
            }
        };
        Ok(AmalgamInstance { a, b, u_in_a, u_in_b, identification, retraction, primes })
    }
}

/// Automorphism of `U` (inside `B`) stored as the images of the generators
/// of `U`.
type Aut = Vec<Element>;

fn apply_aut(b: &PcPresentation, u: &Subgroup, f: &Aut, w: &Element) -> Result<Element> {
    let c = u.coordinates(b, w)?;
    let mut out = b.identity();
    for (img, e) in f.iter().zip(c) {
        if e != 0 {
            out = b.multiply(&out, &b.power(img, e)?)?;
        }
    }
    Ok(out)
}

fn compose(b: &PcPresentation, u: &Subgroup, f: &Aut, g: &Aut) -> Result<Aut> {
    g.iter().map(|w| apply_aut(b, u, f, w)).collect()
}

/// The group generated by `gens`, or `None` past the closure limit.
fn aut_closure(b: &PcPresentation, u: &Subgroup, gens: &[Aut]) -> Result<Option<BTreeSet<Aut>>> {
    let id: Aut = u.generators();
    let mut seen = BTreeSet::new();
    seen.insert(id.clone());
    let mut queue = vec![id];
    while let Some(f) = queue.pop() {
        for g in gens {
            let h = compose(b, u, g, &f)?;
            if seen.insert(h.clone()) {
                if seen.len() > AUT_CLOSURE_LIMIT {
                    return Ok(None);
                }
                queue.push(h);
            }
        }
    }
    Ok(Some(seen))
}

/// Decides whether `Aut_P(U)` is abelian or equals one of `Aut_A(U)`,
/// `Aut_B(U)`.
fn aut_condition(inst: &AmalgamInstance) -> Result<Condition> {
    let label = "automorphisms of U induced by the factors";
    let (a, b) = (&inst.a, &inst.b);
    let u = &inst.u_in_b;
    let back = inst.identification.inverse()?;
    let ugens = u.generators();
    let mut from_a = Vec::new();
    for i in 0..a.rank() {
        let g = a.generator(i);
        let f: Aut = ugens
            .iter()
            .map(|v| inst.identification.apply(&a.conjugate(&back.apply(v)?, &g)?))
            .collect::<Result<_>>()?;
        from_a.push(f);
    }
    let from_b: Vec<Aut> = (0..b.rank())
        .map(|i| ugens.iter().map(|v| b.conjugate(v, &b.generator(i))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let all: Vec<&Aut> = from_a.iter().chain(&from_b).collect();
    let mut commute = true;
    'outer: for (i, f) in all.iter().enumerate() {
        for g in &all[i + 1..] {
            if compose(b, u, f, g)? != compose(b, u, g, f)? {
                commute = false;
                break 'outer;
            }
        }
    }
    if commute {
        return Ok(Condition::new(label, Status::Pass, "the generator actions commute, so the induced group is abelian"));
    }
    let ca = aut_closure(b, u, &from_a)?;
    let cb = aut_closure(b, u, &from_b)?;
    match (ca, cb) {
        (Some(ca), Some(cb)) => {
            if cb.is_subset(&ca) {
                Ok(Condition::new(label, Status::Pass, format!("the action of B lies in that of A ({} automorphisms)", ca.len())))
            } else if ca.is_subset(&cb) {
                Ok(Condition::new(label, Status::Pass, format!("the action of A lies in that of B ({} automorphisms)", cb.len())))
            } else {
                Ok(Condition::new(label, Status::Unknown, "actions do not commute and neither contains the other"))
            }
        }
        _ => Ok(Condition::new(label, Status::Unknown, format!("induced automorphism group exceeds {AUT_CLOSURE_LIMIT} elements"))),
    }
}

/// `A *_U B` with `U` normal in both factors.
pub fn check_amalgam_normal(inst: &AmalgamInstance) -> Result<Verdict> {
    let (a, b) = (&inst.a, &inst.b);
    if !inst.u_in_a.is_normal(a)? {
        return Err(hypothesis("U is not normal in A"));
    }
    if !inst.u_in_b.is_normal(b)? {
        return Err(hypothesis("U is not normal in B"));
    }
    let aut = aut_condition(inst)?;
    let certified = aut.status == Status::Pass;
    let mut conds = vec![residual_condition("A", a, &inst.primes)?, residual_condition("B", b, &inst.primes)?, aut];
    for c in [
        isolation_condition("U isolated in A".into(), a, &inst.u_in_a, &inst.primes)?,
        isolation_condition("U isolated in B".into(), b, &inst.u_in_b, &inst.primes)?,
    ] {
        if c.status == Status::Fail && !certified {
            let ev = format!("{}; necessity needs the automorphism hypothesis", c.evidence);
            conds.push(Condition::new(c.label, Status::Unknown, ev));
        } else {
            conds.push(c);
        }
    }
    Ok(Verdict::from_conditions(conds))
}

/// `A *_U B` with `U` a retract of `B`.
pub fn check_amalgam_retract(inst: &AmalgamInstance) -> Result<Verdict> {
    if inst.retraction.is_none() {
        return Err(hypothesis("no retraction of B onto U was given"));
    }
    let conds = vec![
        Condition::new("U is a retract of B", Status::Pass, "retraction verified and fixes U"),
        residual_condition("A", &inst.a, &inst.primes)?,
        residual_condition("B", &inst.b, &inst.primes)?,
    ];
    Ok(Verdict::from_conditions(conds))
}

/// An edge group embedded in two vertex groups, through `map` from its
/// image in `from` onto its image in `to`.
#[derive(Clone, Debug)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub map: SubgroupMap,
}

#[derive(Clone, Debug)]
pub struct GraphInstance {
    pub vertices: Vec<(String, PcPresentation)>,
    pub edges: Vec<GraphEdge>,
    pub primes: PrimeSet,
}

impl GraphInstance {
    /// Each edge is `(from, to, generators in from, generators in to)`.
    pub fn new(
        vertices: Vec<(String, PcPresentation)>,
        edges: Vec<(usize, usize, Vec<Element>, Vec<Element>)>,
        primes: PrimeSet,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(hypothesis("the graph has no vertices"));
        }
        let mut out = Vec::new();
        let mut parent: Vec<usize> = (0..vertices.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for (e, (from, to, gf, gt)) in edges.into_iter().enumerate() {
            if from >= vertices.len() || to >= vertices.len() {
                return Err(Error::InvalidArgument(format!("edge {e} refers to a missing vertex")));
            }
            let map = SubgroupMap::new(&vertices[from].1, &vertices[to].1, gf, gt)
                .map_err(|err| hypothesis(format!("edge {e}: {err}")))?;
            if !map.is_injective()? {
                return Err(hypothesis(format!("edge {e}: the embeddings do not agree on an isomorphic edge group")));
            }
            let (ra, rb) = (find(&mut parent, from), find(&mut parent, to));
            parent[ra] = rb;
            out.push(GraphEdge { from, to, map });
        }
        let root = find(&mut parent, 0);
        if (0..vertices.len()).any(|v| find(&mut parent, v) != root) {
            return Err(hypothesis("the graph is not connected"));
        }
        Ok(GraphInstance { vertices, edges: out, primes })
    }
}

/// Graph of groups with central edge images.
pub fn check_graph_central(inst: &GraphInstance) -> Result<Verdict> {
    let primes = &inst.primes;
    let mut conds = Vec::new();
    for (name, x) in &inst.vertices {
        conds.push(residual_condition(&format!("vertex {name}"), x, primes)?);
    }
    // edge images at each vertex, labelled
    let mut images: Vec<Vec<(String, Subgroup)>> = vec![Vec::new(); inst.vertices.len()];
    for (e, edge) in inst.edges.iter().enumerate() {
        images[edge.from].push((format!("edge {e} in {}", inst.vertices[edge.from].0), edge.map.domain().clone()));
        images[edge.to].push((format!("edge {e} in {}", inst.vertices[edge.to].0), edge.map.image()?));
    }
    let mut all_proper = true;
    for (v, list) in images.iter().enumerate() {
        let (name, x) = &inst.vertices[v];
        for (label, s) in list {
            if !is_central(x, s)? {
                return Err(hypothesis(format!("{label} is not central in {name}")));
            }
            if s == &Subgroup::whole(x) {
                all_proper = false;
            }
        }
    }
    let is_tree = inst.edges.len() + 1 == inst.vertices.len();
    if is_tree && all_proper {
        for (v, list) in images.iter().enumerate() {
            let x = &inst.vertices[v].1;
            for (label, s) in list {
                conds.push(isolation_condition(format!("{label} isolated"), x, s, primes)?);
            }
        }
        return Ok(Verdict::from_conditions(conds));
    }
    // the subgroup generated at each vertex must be the direct product of
    // the edge images
    for (v, list) in images.iter().enumerate() {
        let (name, x) = &inst.vertices[v];
        for (i, (label, s)) in list.iter().enumerate() {
            let mut others = Subgroup::trivial(x);
            for (j, (_, t)) in list.iter().enumerate() {
                if j != i {
                    others = others.join_subgroup(x, t)?;
                }
            }
            if !s.intersection(x, &others)?.is_trivial() {
                return Err(hypothesis(format!("{label} meets the other edge images at {name} nontrivially")));
            }
        }
    }
    if all_proper {
        for (v, list) in images.iter().enumerate() {
            let x = &inst.vertices[v].1;
            for (label, s) in list {
                conds.push(isolation_condition(format!("{label} isolated"), x, s, primes)?);
            }
        }
    } else {
        // sufficient only: a failure leaves the question open
        for (v, list) in images.iter().enumerate() {
            let (name, x) = &inst.vertices[v];
            let mut hv = Subgroup::trivial(x);
            for (_, s) in list {
                hv = hv.join_subgroup(x, s)?;
            }
            let c = isolation_condition(format!("edge images at {name} generate an isolated subgroup"), x, &hv, primes)?;
            if c.status == Status::Fail {
                conds.push(Condition::new(c.label, Status::Unknown, format!("{}; this is only sufficient", c.evidence)));
            } else {
                conds.push(c);
            }
        }
    }
    Ok(Verdict::from_conditions(conds))
}
