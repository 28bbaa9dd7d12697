//! Homomorphisms between polycyclic presentations and partial maps defined on
//! subgroups.

use alloc::format;
use alloc::vec::Vec;

use crate::pc::{Element, Int, PcPresentation};
use crate::subgroup::Subgroup;
use crate::{Error, Result};

/// A homomorphism given by the images of the generators of its source.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    source: PcPresentation,
    target: PcPresentation,
    images: Vec<Element>,
}

impl Homomorphism {
    /// Checks every power and conjugation relation of the source.
    pub fn new(source: PcPresentation, target: PcPresentation, images: Vec<Element>) -> Result<Homomorphism> {
        if images.len() != source.rank() {
            return Err(Error::NotAHomomorphism(format!("{} images for {} generators", images.len(), source.rank())));
        }
        if images.iter().any(|e| e.len() != target.rank()) {
            return Err(Error::NotAHomomorphism("image of the wrong length".into()));
        }
        let hom = Homomorphism { source, target, images };
        let s = &hom.source;
        let t = &hom.target;
        for i in 0..s.rank() {
            if let Some(rel) = s.power_relation(i) {
                let o = s.relative_order(i).finite().expect("power relation on a finite layer");
                let lhs = t.power(&hom.images[i], o)?;
                if lhs != hom.apply(&rel)? {
                    return Err(Error::NotAHomomorphism(format!("power relation of {}", s.generators()[i].name)));
                }
            }
            for j in i + 1..s.rank() {
                let lhs = t.conjugate(&hom.images[j], &hom.images[i])?;
                if lhs != hom.apply(&s.conjugation_relation(j, i))? {
                    return Err(Error::NotAHomomorphism(format!(
                        "relation {}^{}",
                        s.generators()[j].name,
                        s.generators()[i].name
                    )));
                }
            }
        }
        Ok(hom)
    }

    pub fn source(&self) -> &PcPresentation {
        &self.source
    }

    pub fn target(&self) -> &PcPresentation {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        let mut out = self.target.identity();
        for (i, &e) in x.exponents().iter().enumerate() {
            if e != 0 {
                out = self.target.multiply(&out, &self.target.power(&self.images[i], e)?)?;
            }
        }
        Ok(out)
    }

    pub fn image(&self) -> Result<Subgroup> {
        Subgroup::span(&self.target, &self.images)
    }

    pub fn image_of(&self, s: &Subgroup) -> Result<Subgroup> {
        let gens = s.generators().iter().map(|g| self.apply(g)).collect::<Result<Vec<_>>>()?;
        Subgroup::span(&self.target, &gens)
    }

    /// The graph `{(phi(x), x)}` in `target x source` meets `1 x source` in
    /// `1 x ker(phi)`.
    pub fn kernel(&self) -> Result<Subgroup> {
        graph_kernel(&self.target, &self.source, &self.images, &identity_gens(&self.source))
    }
}

fn identity_gens(x: &PcPresentation) -> Vec<Element> {
    (0..x.rank()).map(|i| x.generator(i)).collect()
}

/// Elements `x` of `<src>` with `phi(x) = 1`, where `phi(src[i]) = img[i]`,
/// assuming the assignment extends to a homomorphism.
fn graph_kernel(target: &PcPresentation, source: &PcPresentation, img: &[Element], src: &[Element]) -> Result<Subgroup> {
    let n = target.rank();
    let p = target.direct_product(source);
    let gens: Vec<Element> = img.iter().zip(src).map(|(a, b)| concat(a, b)).collect();
    let g = Subgroup::span(&p, &gens)?;
    let tail: Vec<Element> =
        g.rows().iter().filter(|r| r[..n].iter().all(|&e| e == 0)).map(|r| Element::from_vec(r[n..].to_vec())).collect();
    Subgroup::span(source, &tail)
}

fn concat(a: &Element, b: &Element) -> Element {
    let mut v = a.exponents().to_vec();
    v.extend_from_slice(b.exponents());
    Element::from_vec(v)
}

/// A homomorphism from a subgroup `H` of `source` into `target`, given on a
/// generating set of `H`. Stored as its graph in `source x target`.
#[derive(Clone, Debug)]
pub struct SubgroupMap {
    source: PcPresentation,
    target: PcPresentation,
    domain: Subgroup,
    gens: Vec<Element>,
    images: Vec<Element>,
    graph: Subgroup,
    product: PcPresentation,
}

impl SubgroupMap {
    /// Fails with [`Error::NotAHomomorphism`] when the assignment is not
    /// well defined.
    pub fn new(source: &PcPresentation, target: &PcPresentation, gens: Vec<Element>, images: Vec<Element>) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(Error::NotAHomomorphism(format!("{} generators but {} images", gens.len(), images.len())));
        }
        if gens.iter().any(|g| g.len() != source.rank()) || images.iter().any(|g| g.len() != target.rank()) {
            return Err(Error::NotAHomomorphism("element of the wrong length".into()));
        }
        let n = source.rank();
        let product = source.direct_product(target);
        let pairs: Vec<Element> = gens.iter().zip(&images).map(|(a, b)| concat(a, b)).collect();
        let graph = Subgroup::span(&product, &pairs)?;
        // well defined iff the graph meets 1 x target trivially
        if graph.rows().iter().any(|r| r[..n].iter().all(|&e| e == 0)) {
            return Err(Error::NotAHomomorphism("the assignment does not extend to a homomorphism".into()));
        }
        let domain = Subgroup::span(source, &gens)?;
        Ok(SubgroupMap { source: source.clone(), target: target.clone(), domain, gens, images, graph, product })
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        let n = self.source.rank();
        let mut v = x.exponents().to_vec();
        v.resize(n + self.target.rank(), 0);
        let rem = self.graph.sift(&self.product, &Element::from_vec(v))?;
        if rem.exponents()[..n].iter().any(|&e| e != 0) {
            return Err(Error::NotInSubgroup);
        }
        // (x, 1) = (1, phi(x)^-1) (x, phi(x))
        let y = Element::from_vec(rem.exponents()[n..].to_vec());
        self.target.inverse(&y)
    }

    pub fn image_of(&self, s: &Subgroup) -> Result<Subgroup> {
        let gens = s.generators().iter().map(|g| self.apply(g)).collect::<Result<Vec<_>>>()?;
        Subgroup::span(&self.target, &gens)
    }

    pub fn image(&self) -> Result<Subgroup> {
        Subgroup::span(&self.target, &self.images)
    }

    pub fn kernel(&self) -> Result<Subgroup> {
        graph_kernel(&self.target, &self.source, &self.images, &self.gens)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.is_trivial())
    }

    /// The inverse map on the image, for injective maps.
    pub fn inverse(&self) -> Result<SubgroupMap> {
        if !self.is_injective()? {
            return Err(Error::NotAHomomorphism("map is not injective".into()));
        }
        SubgroupMap::new(&self.target, &self.source, self.images.clone(), self.gens.clone())
    }

    /// Exponents of `x` relative to its order in the domain, for reporting.
    pub fn exponent_in_domain(&self, x: &Element) -> Result<Vec<Int>> {
        self.domain.coordinates(&self.source, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pc::fixtures::*;

    #[test]
    fn projection_and_kernel() {
        let h = heisenberg();
        let ab = free_abelian(2);
        let images = alloc::vec![ab.generator(0), ab.generator(1), ab.identity()];
        let f = Homomorphism::new(h.clone(), ab.clone(), images).unwrap();
        let k = f.kernel().unwrap();
        assert_eq!(k.rows(), &[alloc::vec![0, 0, 1]]);
        assert_eq!(f.image().unwrap(), Subgroup::whole(&ab));
        let bad = alloc::vec![ab.generator(0), ab.generator(1), ab.generator(0)];
        assert!(Homomorphism::new(h, ab, bad).is_err());
    }

    #[test]
    fn subgroup_maps() {
        let z = integers();
        let a = |k| z.element(&[k]).unwrap();
        let f = SubgroupMap::new(&z, &z, alloc::vec![a(2)], alloc::vec![a(3)]).unwrap();
        assert_eq!(f.apply(&a(10)).unwrap(), a(15));
        assert!(matches!(f.apply(&a(3)), Err(Error::NotInSubgroup)));
        assert!(f.is_injective().unwrap());
        assert_eq!(f.inverse().unwrap().apply(&a(-9)).unwrap(), a(-6));
        assert!(SubgroupMap::new(&z, &z, alloc::vec![a(2), a(3)], alloc::vec![a(1), a(1)]).is_err());
        let c6 = cyclic(6);
        let g = SubgroupMap::new(&z, &c6, alloc::vec![a(1)], alloc::vec![c6.generator(0)]).unwrap();
        assert_eq!(g.kernel().unwrap().rows(), &[alloc::vec![6]]);
    }
}
