use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("handles belong to different kernel instances")]
    KernelMismatch,
    #[error("rename pairing is not injective (target `{0}` used twice)")]
    RenameNotInjective(String),
    #[error("enumeration exceeded limit of {0} assignments")]
    EnumerationLimit(usize),

    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("separation violation: {place} mentions variable `{var}`")]
    SeparationViolation { place: String, var: String },
    #[error("deadlock: player {player} has no successor from state {state}")]
    Deadlock { player: String, state: String },
    #[error("initial condition {0} is unsatisfiable")]
    UnsatInitial(String),

    #[error("acceptance set is not weak: states {0} and {1} share an SCC but disagree on acc")]
    NotWeak(String, String),
    #[error("predicate is not a union of SCCs (saturation check failed)")]
    NotSccSaturated,
    #[error("fixed point failed to converge within {0} iterations")]
    FixedPointDiverged(u64),

    #[error("state space 2^{vars} exceeds the explicit budget of {cap} states")]
    BudgetExceeded { vars: usize, cap: u64 },
    #[error("controller undefined at state {state} (outside the winning region)")]
    ControllerUndefined { state: String },
    #[error("input {input} violates the environment transition relation at state {state}")]
    IllegalInput { state: String, input: String },
    #[error("strategy export would need {rows} rows (limit {limit}); use --dump-dd instead")]
    ExportTooLarge { rows: u128, limit: u128 },
    #[error("GR(k) pipeline requires a separated game: {0}")]
    NotSeparated(String),

    #[error("transducer alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("transducer not output-injective at state `{state}`: label `{label}` repeats")]
    NotInvertible { state: String, label: String },
    #[error("adapter assembly failed: {0}")]
    AdapterAssembly(String),
    #[error("illegal input symbol `{symbol}` at transducer state `{state}`")]
    IllegalSymbol { state: String, symbol: String },

    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
