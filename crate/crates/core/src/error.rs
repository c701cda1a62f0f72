use thiserror::Error;

/// Errors surfaced by set operations, the flow driver, and the CLI.
#[derive(Debug, Error)]
pub enum StarflowError {
    /// Erosion radius swallowed the whole set.
    #[error("eroded-empty: erosion by {radius} leaves no set")]
    ErodedEmpty { radius: f64 },

    /// Shrink-map parameter outside the admissible range `[0, 1/(2(R0^2-r0^2)))`.
    #[error("shrink-range: s={s} outside [0, {s_max})")]
    ShrinkRange { s: f64, s_max: f64 },

    /// Inner solver could not produce a feasible point no worse than the input.
    #[error("step-failed at t={t}: {detail}")]
    StepFailed { t: f64, detail: String },

    /// Radial ODE integration reached a nonpositive radius.
    #[error("collapse: radius reached {radius} at t={t}")]
    Collapse { radius: f64, t: f64 },

    /// Invalid configuration or parameter set.
    #[error("config: {0}")]
    Config(String),

    /// Stored trace directory is unreadable or inconsistent.
    #[error("corrupt trace: {0}")]
    CorruptTrace(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
