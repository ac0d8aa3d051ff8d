use serde_json::{json, Value};
use tame_core::artinschreier::AsError;
use tame_core::cech::CechError;
use tame_core::funcfield::FieldError;
use tame_core::huber::HuberError;
use tame_core::kummer::KummerError;
use tame_core::tameness::TameError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

/// A failure before any report could be produced. `code` is the stable,
/// machine-readable part; `message` is for people.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn usage(code: &'static str, message: impl Into<String>) -> Self {
        CliError { code, message: message.into(), exit: EXIT_USAGE }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": crate::schema_id("error"),
            "error": { "code": self.code, "message": self.message, "exit": self.exit },
        })
    }
}

fn field_code(e: &FieldError) -> &'static str {
    match e {
        FieldError::NotPrimePower(_) => "not-prime-power",
        FieldError::FieldTooLarge(_) => "field-too-large",
        FieldError::BadModulus(_) => "bad-modulus",
        FieldError::NotIrreducible(_) => "not-irreducible",
        FieldError::DegreeTooLarge(_) => "degree-too-large",
        FieldError::IrreducibleFactorizationFailure(_) => "factorization-failure",
        FieldError::Parse(_) => "parse-error",
        FieldError::Invalid(_) => "invalid-argument",
    }
}

fn huber_code(e: &HuberError) -> &'static str {
    match e {
        HuberError::UnsupportedDescriptor(_) => "unsupported-descriptor",
        HuberError::NotInRing(_) => "not-in-ring",
        HuberError::Field(f) => field_code(f),
    }
}

fn kummer_code(e: &KummerError) -> &'static str {
    match e {
        KummerError::NotTame { .. } => "not-tame",
        KummerError::RootOfUnityUnavailable(_) => "root-of-unity-unavailable",
        KummerError::DegeneratePresentation(_) => "degenerate-presentation",
        KummerError::LevelMismatch(..) => "level-mismatch",
        KummerError::LevelCap(_) => "level-cap",
        KummerError::IndexOutOfRange(..) => "index-out-of-range",
        KummerError::UnsupportedPlace(_) => "unsupported-place",
        KummerError::Field(f) => field_code(f),
        KummerError::Invalid(_) => "invalid-argument",
    }
}

fn cech_code(e: &CechError) -> &'static str {
    match e {
        CechError::LevelCap(_) => "level-cap",
        CechError::WindowTooSmall(_) => "window-too-small",
        CechError::UnsupportedDescriptor(_) => "unsupported-descriptor",
        CechError::Invalid(_) => "invalid-complex",
        CechError::Kummer(k) => kummer_code(k),
        CechError::Huber(h) => huber_code(h),
        CechError::Field(f) => field_code(f),
    }
}

macro_rules! from_core {
    ($t:ty, $code:expr) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::usage($code(&e), e.to_string())
            }
        }
    };
}

from_core!(FieldError, field_code);
from_core!(HuberError, huber_code);
from_core!(KummerError, kummer_code);
from_core!(CechError, cech_code);

impl From<TameError> for CliError {
    fn from(e: TameError) -> Self {
        let code = match &e {
            TameError::InseparableExtension(_) => "inseparable-extension",
            TameError::Unsupported(_) => "unsupported-descriptor",
            TameError::Field(f) => field_code(f),
            TameError::Huber(h) => huber_code(h),
            TameError::Invalid(_) => "invalid-argument",
        };
        CliError::usage(code, e.to_string())
    }
}

impl From<AsError> for CliError {
    fn from(e: AsError) -> Self {
        let (code, exit) = match &e {
            AsError::OracleMismatch { .. } => ("oracle-mismatch", EXIT_VERIFICATION),
            AsError::DegreeBound(_) => ("degree-bound", EXIT_USAGE),
            AsError::UnsupportedDescriptor(_) => ("unsupported-descriptor", EXIT_USAGE),
            AsError::Cech(c) => (cech_code(c), EXIT_USAGE),
            AsError::Huber(h) => (huber_code(h), EXIT_USAGE),
            AsError::Field(f) => (field_code(f), EXIT_USAGE),
        };
        CliError { code, message: e.to_string(), exit }
    }
}
