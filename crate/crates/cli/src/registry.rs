//! The shipped configs, one per acceptance criterion.

/// A registered acceptance config.
#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub criterion: u32,
    pub file: &'static str,
    pub summary: &'static str,
    /// Wall-clock budget in seconds.
    pub budget: f64,
    /// A failing non-blocking entry is reported but does not fail the suite.
    pub blocking: bool,
    pub text: &'static str,
}

macro_rules! entry {
    ($c:expr, $file:literal, $budget:expr, $blocking:expr, $summary:literal) => {
        Entry { criterion: $c, file: $file, summary: $summary, budget: $budget, blocking: $blocking, text: include_str!(concat!("../../../configs/", $file)) }
    };
}

pub const REGISTRY: [Entry; 14] = [
    entry!(1, "ratio_table.json", 1.0, true, "RHS/LHS ratio table against the printed rationals"),
    entry!(2, "clog_schwarzschild.json", 300.0, true, "Schwarzschild order-(p+1) log coefficients"),
    entry!(3, "potential_cancellation.json", 180.0, true, "log cancellation for the -M/r^3 potential"),
    entry!(4, "minkowski_peeling.json", 120.0, true, "no logs at orders p..p+2 on Minkowski"),
    entry!(5, "semilinear.json", 120.0, true, "semilinear first-iterate log and its coefficient expression"),
    entry!(6, "antipodal.json", 120.0, true, "antipodal matching of corner limits"),
    entry!(7, "connection.json", 30.0, true, "Gamma-formula connection coefficients against continuation"),
    entry!(8, "peeling_classification.json", 10.0, true, "peeling classification and tau log coefficients"),
    entry!(9, "series_asymptotics.json", 10.0, true, "growth of the tau series coefficients"),
    entry!(10, "ode_round_trip.json", 1.0, true, "Euler-operator round trip on random expansions"),
    entry!(11, "conservation.json", 120.0, true, "convergence of the conservation-law residual"),
    entry!(12, "schwarzschild_bracket.json", 10.0, true, "Schwarzschild l = 0 bracket against quadrature"),
    entry!(13, "moment_decay.json", 120.0, true, "decay gain toward i0 from killing moments"),
    entry!(14, "guess.json", 10.0, false, "conjectured multiplier pattern (hypothesis)"),
];

/// Looks up a criterion number, a config file name or its stem.
pub fn find(key: &str) -> Option<&'static Entry> {
    if let Ok(n) = key.parse::<u32>() {
        return REGISTRY.iter().find(|e| e.criterion == n);
    }
    REGISTRY.iter().find(|e| e.file == key || e.file.trim_end_matches(".json") == key)
}
