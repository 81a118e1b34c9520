use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Edge, GroupAutomaton};
use crate::error::{Error, Result};
use crate::groups::{ElementKey, Group, GroupElement};

/// Homomorphism given by the images of the base generators of the source.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Group,
    target: Group,
    images: BTreeMap<String, GroupElement>,
    kernel: Option<Vec<GroupElement>>,
    section: Option<BTreeMap<String, GroupElement>>,
}

impl GroupHom {
    /// Checks that every base generator of `source` has an image and that
    /// the defining relations of `source` map to the identity.
    pub fn new<I>(source: Group, target: Group, images: I) -> Result<GroupHom>
    where
        I: IntoIterator<Item = (String, GroupElement)>,
    {
        let images: BTreeMap<String, GroupElement> = images.into_iter().collect();
        let base = source.base_generators();
        for name in images.keys() {
            if !base.contains(name) {
                return Err(Error::UnknownGenerator(name.clone()));
            }
        }
        for (name, img) in &images {
            target.check(img).map_err(|_| Error::InvalidHom(format!("image of {name} is not in the target")))?;
        }
        if let Some(missing) = base.iter().find(|n| !images.contains_key(*n)) {
            return Err(Error::InvalidHom(format!("no image for generator {missing}")));
        }
        let hom = GroupHom { source, target, images, kernel: None, section: None };
        for rel in hom.source.relations() {
            let mut acc = hom.target.identity();
            for letter in rel.letters() {
                let p = hom.target.pow(&hom.images[&letter.name], &letter.exp)?;
                acc = hom.target.mul(&acc, &p)?;
            }
            if !hom.target.is_identity(&acc) {
                return Err(Error::InvalidHom(format!("relation {rel} does not map to the identity")));
            }
        }
        Ok(hom)
    }

    /// Declares the kernel as the given finite set and a lift of each target
    /// base generator. The kernel must consist of elements mapping to the
    /// identity, contain the identity, be closed under products and under
    /// conjugation by the source generators; each section element must map
    /// to its generator.
    pub fn with_finite_kernel<I>(mut self, kernel: Vec<GroupElement>, section: I) -> Result<GroupHom>
    where
        I: IntoIterator<Item = (String, GroupElement)>,
    {
        let section: BTreeMap<String, GroupElement> = section.into_iter().collect();
        let src = &self.source;
        let mut keys = BTreeSet::new();
        let mut members = Vec::new();
        for k in kernel {
            src.check(&k)?;
            if !self.target.is_identity(&self.apply(&k)?) {
                return Err(Error::InvalidHom(format!("{k} is not in the kernel")));
            }
            if keys.insert(src.key(&k)) {
                members.push(k);
            }
        }
        if !keys.contains(&src.key(&src.identity())) {
            return Err(Error::InvalidHom("kernel listing lacks the identity".into()));
        }
        let base: Vec<GroupElement> =
            src.base_generators().iter().map(|n| src.generator(n)).collect::<Result<_>>()?;
        for a in &members {
            for b in &members {
                if !keys.contains(&src.key(&src.mul(a, b)?)) {
                    return Err(Error::InvalidHom("kernel listing is not closed under products".into()));
                }
            }
            for g in &base {
                if !keys.contains(&src.key(&src.conj(a, g)?)) {
                    return Err(Error::InvalidHom("kernel listing is not normal".into()));
                }
            }
        }
        for name in self.target.base_generators() {
            let lift = section
                .get(&name)
                .ok_or_else(|| Error::InvalidHom(format!("no section for generator {name}")))?;
            let expected = self.target.generator(&name)?;
            if self.apply(lift)? != expected {
                return Err(Error::InvalidHom(format!("section of {name} does not map to it")));
            }
        }
        self.kernel = Some(members);
        self.section = Some(section);
        Ok(self)
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn kernel(&self) -> Option<&[GroupElement]> {
        self.kernel.as_deref()
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        let word = self.source.normal_word(g)?;
        let mut acc = self.target.identity();
        for letter in word.letters() {
            let p = self.target.pow(&self.images[&letter.name], &letter.exp)?;
            acc = self.target.mul(&acc, &p)?;
        }
        Ok(acc)
    }

    /// A preimage of a target element, built from the section.
    pub fn lift(&self, g: &GroupElement) -> Result<GroupElement> {
        let section = self.section.as_ref().ok_or(Error::FiniteKernelRequired)?;
        let word = self.target.normal_word(g)?;
        let mut acc = self.source.identity();
        for letter in word.letters() {
            let p = self.source.pow(&section[&letter.name], &letter.exp)?;
            acc = self.source.mul(&acc, &p)?;
        }
        Ok(acc)
    }
}

/// Automaton over the target accepting the image of the accepted set: the
/// same graph with every label mapped.
pub fn image(aut: &GroupAutomaton, hom: &GroupHom) -> Result<GroupAutomaton> {
    if aut.group().spec() != hom.source.spec() {
        return Err(Error::SpecMismatch);
    }
    aut.map_labels(hom.target.clone(), |g| hom.apply(g))
}

/// Automaton over the source accepting the full preimage of the accepted
/// set, for a homomorphism with declared finite kernel `T`.
///
/// Labels are lifted through the section, so each accepting path yields one
/// preimage of its label; a final block of edges, one per element of `T`,
/// leads from every old terminal to a single new terminal and multiplies by
/// `T`, which fills out each fiber.
pub fn preimage_finite_kernel(aut: &GroupAutomaton, hom: &GroupHom) -> Result<GroupAutomaton> {
    if aut.group().spec() != hom.target.spec() {
        return Err(Error::SpecMismatch);
    }
    let kernel = hom.kernel.as_ref().ok_or(Error::FiniteKernelRequired)?;
    let lifted = aut.map_labels(hom.source.clone(), |g| hom.lift(g))?;
    let fin = aut.num_states();
    let mut edges: Vec<Edge> = lifted.edges().to_vec();
    let mut seen: BTreeSet<ElementKey> = BTreeSet::new();
    for k in kernel {
        if !seen.insert(hom.source.key(k)) {
            continue;
        }
        for &t in aut.terminals() {
            edges.push(Edge { source: t, label: k.clone(), target: fin });
        }
    }
    GroupAutomaton::new(hom.source.clone(), fin + 1, edges, aut.initial(), BTreeSet::from([fin]))
}
