use serde::Serialize;

/// Which property a [`DiagnosticReport`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    Evenness,
    Quasiconvexity,
    Levelset,
    FlatPart,
    FLimit,
    Discount,
}

impl DiagnosticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Evenness => "evenness",
            Self::Quasiconvexity => "quasiconvexity",
            Self::Levelset => "levelset",
            Self::FlatPart => "flatpart",
            Self::FLimit => "flimit",
            Self::Discount => "discount",
        }
    }
}

/// A p-node where the property fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub p: Vec<f64>,
    /// Level `μ`, scale `S` or rate `λ` the failure belongs to, if any.
    pub level: Option<f64>,
    /// Size of the violation at this node.
    pub value: f64,
}

/// Outcome of one diagnostic.
///
/// `pass` holds exactly when `defect <= tolerance`, and `witnesses` is
/// nonempty exactly when the diagnostic fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub kind: DiagnosticKind,
    pub pass: bool,
    pub defect: f64,
    pub witnesses: Vec<Witness>,
    pub tolerance: f64,
    /// Unconverged nodes left out of the analysis.
    pub excluded: usize,
}

impl DiagnosticReport {
    pub(crate) fn new(
        kind: DiagnosticKind,
        defect: f64,
        tolerance: f64,
        mut witnesses: Vec<Witness>,
        excluded: usize,
    ) -> Self {
        let pass = defect <= tolerance;
        if pass {
            witnesses.clear();
        } else if witnesses.is_empty() {
            witnesses.push(Witness {
                p: Vec::new(),
                level: None,
                value: defect,
            });
        }
        Self {
            kind,
            pass,
            defect,
            witnesses,
            tolerance,
            excluded,
        }
    }
}
