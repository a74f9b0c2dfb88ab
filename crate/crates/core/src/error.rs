use thiserror::Error;

/// Errors produced by the metric pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n-gram order {0} is outside 1..=4")]
    InvalidOrder(usize),

    #[error("cannot build an IDF table from an empty corpus")]
    EmptyCorpus,

    #[error("invalid IDF table: {0}")]
    InvalidIdf(String),

    #[error("reference set is empty")]
    MissingReferences,

    #[error("at least {needed} captions are required, got {got}")]
    InsufficientCaptions { needed: usize, got: usize },

    #[error("at least 2 references are required for leave-one-out accuracy, got {got}")]
    InsufficientReferences { got: usize },

    #[error("caption {index} is empty after tokenization")]
    DegenerateCaption { index: usize },

    #[error("kernel spectrum is identically zero")]
    DegenerateSpectrum,

    #[error("matrix is not square: {len} entries for size {size}")]
    NotSquare { size: usize, len: usize },

    #[error("matrix is not symmetric at ({row}, {col}): difference {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error("kernel is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("k = {k} is outside 2..={m}")]
    InvalidK { k: usize, m: usize },

    #[error("correlation is undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("missing data: {0}")]
    MissingData(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("image {image_id}: {source}")]
    Image {
        image_id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn for_image(self, image_id: &str) -> Self {
        Error::Image {
            image_id: image_id.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
