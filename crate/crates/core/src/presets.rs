//! Bundled example systems used by the documentation, tests, and the CLI
//! `examples` subcommand.

use crate::prob::System;

/// Id of the binary randomized-response survey preset.
pub const BINARY_SURVEY_ID: &str = "fig2";

/// Id of the three-symbol symmetric-channel preset.
pub const THREE_SYMBOL_ID: &str = "fig3";

/// Binary randomized-response survey: a uniform yes/no secret answered
/// truthfully with probability 5/6.
///
/// Prior (1/2, 1/2); channel rows (5/6, 1/6) and (1/6, 5/6).
pub fn binary_survey() -> System {
    System::from_parts(
        crate::prob::ProbVec::new(vec![0.5, 0.5]).expect("valid prior"),
        crate::prob::Channel::new(vec![
            vec![5.0 / 6.0, 1.0 / 6.0],
            vec![1.0 / 6.0, 5.0 / 6.0],
        ])
        .expect("valid channel"),
        Some(vec!["Yes".into(), "No".into()]),
        Some(vec!["Yes".into(), "No".into()]),
    )
    .expect("valid system")
}

/// Three-symbol system: skewed prior (0.6, 0.3, 0.1) observed through a
/// symmetric channel that reports the true symbol with probability 0.6 and
/// each other symbol with probability 0.2.
pub fn three_symbol() -> System {
    System::new(
        vec![0.6, 0.3, 0.1],
        vec![
            vec![0.6, 0.2, 0.2],
            vec![0.2, 0.6, 0.2],
            vec![0.2, 0.2, 0.6],
        ],
    )
    .expect("valid system")
}

/// Look up a preset by its id (`"fig2"` or `"fig3"`).
pub fn by_id(id: &str) -> Option<System> {
    match id {
        BINARY_SURVEY_ID => Some(binary_survey()),
        THREE_SYMBOL_ID => Some(three_symbol()),
        _ => None,
    }
}
