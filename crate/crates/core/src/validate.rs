//! Coherence validation for tabulated bicategories.

use crate::bicategory::Bicategory;
use crate::bounds::SizeBounds;
use crate::error::Result;
use crate::ids::{One, Two};
use crate::report::{Axiom, CoherenceReport};

/// Validate against the default size bounds.
pub fn validate_bicategory(b: &Bicategory) -> Result<CoherenceReport> {
    validate_bicategory_with(b, &SizeBounds::default())
}

pub fn validate_bicategory_with(b: &Bicategory, bounds: &SizeBounds) -> Result<CoherenceReport> {
    bounds.check_bicategory(b.ob_count(), b.one_count(), b.two_count())?;
    let mut r = CoherenceReport::new();
    let n1 = |f: One| b.one_name(f).to_string();
    let n2 = |a: Two| b.two_name(a).to_string();

    // typing of every table value
    for x in b.obs() {
        let f = b.id1(x);
        if b.src1(f) != x || b.tgt1(f) != x {
            r.push(Axiom::Typing, vec![b.ob_name(x).into(), n1(f)]);
        }
    }
    for f in b.ones() {
        let (x, y) = (b.src1(f), b.tgt1(f));
        let a = b.id2(f);
        if b.src2(a) != f || b.tgt2(a) != f {
            r.push(Axiom::Typing, vec![n1(f), n2(a)]);
        }
        let l = b.lunit(f);
        if b.hcomp1(b.id1(x), f) != Some(b.src2(l)) || b.tgt2(l) != f {
            r.push(Axiom::Typing, vec![n1(f), n2(l)]);
        }
        let ru = b.runit(f);
        if b.hcomp1(f, b.id1(y)) != Some(b.src2(ru)) || b.tgt2(ru) != f {
            r.push(Axiom::Typing, vec![n1(f), n2(ru)]);
        }
    }
    for (f, g, fg) in b.hcomp1_entries() {
        if b.src1(fg) != b.src1(f) || b.tgt1(fg) != b.tgt1(g) {
            r.push(Axiom::Typing, vec![n1(f), n1(g), n1(fg)]);
        }
    }
    for (a, c, ac) in b.vcomp_entries() {
        if b.src2(ac) != b.src2(a) || b.tgt2(ac) != b.tgt2(c) {
            r.push(Axiom::Typing, vec![n2(a), n2(c), n2(ac)]);
        }
    }
    for (a, c, ac) in b.hcomp2_entries() {
        let s = b.hcomp1(b.src2(a), b.src2(c));
        let t = b.hcomp1(b.tgt2(a), b.tgt2(c));
        if s != Some(b.src2(ac)) || t != Some(b.tgt2(ac)) {
            r.push(Axiom::Typing, vec![n2(a), n2(c), n2(ac)]);
        }
    }
    for (f, g, h, a) in b.assoc_entries() {
        let s = b.hcomp1(f, g).and_then(|fg| b.hcomp1(fg, h));
        let t = b.hcomp1(g, h).and_then(|gh| b.hcomp1(f, gh));
        if s != Some(b.src2(a)) || t != Some(b.tgt2(a)) {
            r.push(Axiom::Typing, vec![n1(f), n1(g), n1(h), n2(a)]);
        }
    }

    // each hom is a category under vertical composition
    for a in b.twos() {
        let (f, g) = (b.src2(a), b.tgt2(a));
        if b.vcomp(b.id2(f), a) != Some(a) || b.vcomp(a, b.id2(g)) != Some(a) {
            r.push(Axiom::HomIdentity, vec![n2(a)]);
        }
    }
    for a in b.twos() {
        for &c in b.twos_from(b.tgt2(a)) {
            let ac = b.vcomp(a, c);
            for &d in b.twos_from(b.tgt2(c)) {
                let lhs = ac.and_then(|ac| b.vcomp(ac, d));
                let rhs = b.vcomp(c, d).and_then(|cd| b.vcomp(a, cd));
                if lhs.is_none() || lhs != rhs {
                    r.push(Axiom::HomAssociativity, vec![n2(a), n2(c), n2(d)]);
                }
            }
        }
    }

    // horizontal composition is a functor
    for (f, g, fg) in b.hcomp1_entries() {
        if b.hcomp2(b.id2(f), b.id2(g)) != Some(b.id2(fg)) {
            r.push(Axiom::HcompIdentity, vec![n1(f), n1(g)]);
        }
    }
    for a in b.twos() {
        for &a1 in b.twos_from(b.tgt2(a)) {
            let aa = b.vcomp(a, a1);
            for &g in b.out_of(b.tgt1(b.src2(a))) {
                for &c in b.twos_from(g) {
                    let ac = b.hcomp2(a, c);
                    for &c1 in b.twos_from(b.tgt2(c)) {
                        let lhs = aa.zip(b.vcomp(c, c1)).and_then(|(x, y)| b.hcomp2(x, y));
                        let rhs = ac.zip(b.hcomp2(a1, c1)).and_then(|(x, y)| b.vcomp(x, y));
                        if lhs.is_none() || lhs != rhs {
                            r.push(Axiom::Interchange, vec![n2(a), n2(a1), n2(c), n2(c1)]);
                        }
                    }
                }
            }
        }
    }

    // invertibility of the structure cells
    for f in b.ones() {
        for (cell, what) in [(b.lunit(f), "lunit"), (b.runit(f), "runit")] {
            if !b.is_invertible(cell) {
                r.push(Axiom::Invertibility, vec![what.into(), n1(f), n2(cell)]);
            }
        }
    }
    for (f, g, h, a) in b.assoc_entries() {
        if !b.is_invertible(a) {
            r.push(Axiom::Invertibility, vec!["assoc".into(), n1(f), n1(g), n1(h), n2(a)]);
        }
    }

    // naturality of unitors
    for a in b.twos() {
        let (f, f1) = (b.src2(a), b.tgt2(a));
        let (x, y) = (b.src1(f), b.tgt1(f));
        let lhs = b
            .hcomp2(b.id2(b.id1(x)), a)
            .and_then(|w| b.vcomp(w, b.lunit(f1)));
        if lhs.is_none() || lhs != b.vcomp(b.lunit(f), a) {
            r.push(Axiom::LeftUnitorNaturality, vec![n2(a)]);
        }
        let lhs = b
            .hcomp2(a, b.id2(b.id1(y)))
            .and_then(|w| b.vcomp(w, b.runit(f1)));
        if lhs.is_none() || lhs != b.vcomp(b.runit(f), a) {
            r.push(Axiom::RightUnitorNaturality, vec![n2(a)]);
        }
    }

    // naturality of the associator
    let twos_from = |x| {
        b.out_of(x)
            .iter()
            .flat_map(move |&f| b.twos_from(f).iter().copied())
    };
    for a in b.twos() {
        for c in twos_from(b.tgt1(b.src2(a))) {
            let ac = b.hcomp2(a, c);
            for d in twos_from(b.tgt1(b.src2(c))) {
                let (f, g, h) = (b.src2(a), b.src2(c), b.src2(d));
                let (f1, g1, h1) = (b.tgt2(a), b.tgt2(c), b.tgt2(d));
                let lhs = ac
                    .and_then(|ac| b.hcomp2(ac, d))
                    .zip(b.assoc(f1, g1, h1))
                    .and_then(|(x, y)| b.vcomp(x, y));
                let rhs = b
                    .hcomp2(c, d)
                    .and_then(|cd| b.hcomp2(a, cd))
                    .zip(b.assoc(f, g, h))
                    .and_then(|(x, y)| b.vcomp(y, x));
                if lhs.is_none() || lhs != rhs {
                    r.push(Axiom::AssociatorNaturality, vec![n2(a), n2(c), n2(d)]);
                }
            }
        }
    }

    // pentagon
    for (f, g, h) in b.composable_triples() {
        for &k in b.out_of(b.tgt1(h)) {
            let lhs = (|| {
                let gh = b.hcomp1(g, h)?;
                let s1 = b.hcomp2(b.assoc(f, g, h)?, b.id2(k))?;
                let s2 = b.assoc(f, gh, k)?;
                let s3 = b.hcomp2(b.id2(f), b.assoc(g, h, k)?)?;
                b.vseq_opt(&[s1, s2, s3])
            })();
            let rhs = (|| {
                let fg = b.hcomp1(f, g)?;
                let hk = b.hcomp1(h, k)?;
                b.vcomp(b.assoc(fg, h, k)?, b.assoc(f, g, hk)?)
            })();
            if lhs.is_none() || lhs != rhs {
                r.push(Axiom::Pentagon, vec![n1(f), n1(g), n1(h), n1(k)]);
            }
        }
    }

    // triangle
    for f in b.ones() {
        let y = b.tgt1(f);
        for &g in b.out_of(y) {
            let lhs = b
                .assoc(f, b.id1(y), g)
                .zip(b.hcomp2(b.id2(f), b.lunit(g)))
                .and_then(|(x, z)| b.vcomp(x, z));
            let rhs = b.hcomp2(b.runit(f), b.id2(g));
            if lhs.is_none() || lhs != rhs {
                r.push(Axiom::Triangle, vec![n1(f), n1(g)]);
            }
        }
    }
    Ok(r)
}
