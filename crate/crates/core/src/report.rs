use std::fmt;

/// Names of the axioms checked by the validators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    // categories
    CategoryTyping,
    CategoryIdentity,
    CategoryAssociativity,
    // bicategories
    Typing,
    HomIdentity,
    HomAssociativity,
    HcompIdentity,
    Interchange,
    AssociatorNaturality,
    LeftUnitorNaturality,
    RightUnitorNaturality,
    Invertibility,
    Pentagon,
    Triangle,
    // functors
    FunctorTyping,
    HomFunctoriality,
    ConstraintNaturality,
    FunctorAssociativity,
    FunctorLeftUnity,
    FunctorRightUnity,
    ConstraintInvertibility,
    Strictness,
    // transformations, modifications, icons
    TransformationTyping,
    TransformationNaturality,
    TransformationUnity,
    TransformationComposition,
    PseudoInvertibility,
    ModificationTyping,
    ModificationAxiom,
    IconTyping,
    IconNaturality,
    IconUnit,
    IconComposition,
    // cleavages
    CleavageCompleteness,
    CleavageCartesian,
    CleavageLift,
    // sections and equivalences
    Section,
    Equivalence,
    WhiskerTriviality,
    // lifts
    StrictLift,
    Cartesian,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        use Axiom::*;
        match self {
            CategoryTyping => "category-typing",
            CategoryIdentity => "category-identity",
            CategoryAssociativity => "category-associativity",
            Typing => "typing",
            HomIdentity => "hom-identity",
            HomAssociativity => "hom-associativity",
            HcompIdentity => "hcomp-identity",
            Interchange => "interchange",
            AssociatorNaturality => "associator-naturality",
            LeftUnitorNaturality => "left-unitor-naturality",
            RightUnitorNaturality => "right-unitor-naturality",
            Invertibility => "invertibility",
            Pentagon => "pentagon",
            Triangle => "triangle",
            FunctorTyping => "functor-typing",
            HomFunctoriality => "hom-functoriality",
            ConstraintNaturality => "constraint-naturality",
            FunctorAssociativity => "functor-associativity",
            FunctorLeftUnity => "functor-left-unity",
            FunctorRightUnity => "functor-right-unity",
            ConstraintInvertibility => "constraint-invertibility",
            Strictness => "strictness",
            TransformationTyping => "transformation-typing",
            TransformationNaturality => "transformation-naturality",
            TransformationUnity => "transformation-unity",
            TransformationComposition => "transformation-composition",
            PseudoInvertibility => "pseudo-invertibility",
            ModificationTyping => "modification-typing",
            ModificationAxiom => "modification-axiom",
            IconTyping => "icon-typing",
            IconNaturality => "icon-naturality",
            IconUnit => "icon-unit",
            IconComposition => "icon-composition",
            CleavageCompleteness => "cleavage-completeness",
            CleavageCartesian => "cleavage-cartesian",
            CleavageLift => "cleavage-lift",
            Section => "section",
            Equivalence => "equivalence",
            WhiskerTriviality => "whisker-triviality",
            StrictLift => "strict-lift",
            Cartesian => "cartesian",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    /// Names of the offending cells.
    pub cells: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at [{}]", self.axiom, self.cells.join(", "))
    }
}

/// Outcome of a validator. `ok()` holds exactly when no violation was recorded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoherenceReport {
    pub violations: Vec<Violation>,
}

impl CoherenceReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, axiom: Axiom, cells: Vec<String>) {
        self.violations.push(Violation { axiom, cells });
    }

    pub fn extend(&mut self, other: CoherenceReport) {
        self.violations.extend(other.violations);
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn axioms(&self) -> Vec<Axiom> {
        let mut out: Vec<Axiom> = self.violations.iter().map(|v| v.axiom).collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for CoherenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}
