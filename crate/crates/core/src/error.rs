use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("all points are collinear, convex hull is degenerate")]
    DegenerateHull,
    #[error("point is not a free exterior point of the polygon")]
    NotFreeExterior,
    #[error("point lies inside or on the shape")]
    PointInsideShape,
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("ray origin is not inside the kernel hull of the star obstacle")]
    OriginOutsideKernel,
    #[error("admissible kernel is empty")]
    EmptyKernel,
    #[error("robot position lies inside obstacle `{0}`")]
    RobotInsideObstacle(String),
    #[error("goal position lies inside obstacle `{0}`")]
    GoalInsideObstacle(String),
    #[error("star world formation did not converge within {0} iterations")]
    IterationLimit(usize),
    #[error("robot lies inside star obstacle {index} (gamma = {gamma})")]
    InsideObstacle { index: usize, gamma: f64 },
    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("star world failed validation:\n{0}")]
    ValidationFailed(String),
    #[error("failed to place {0} after 10000 rejections")]
    PlacementFailure(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::SchemaVersion(_) | Error::MalformedInput(_) | Error::ValidationFailed(_) => 2,
            Error::RobotInsideObstacle(_)
            | Error::GoalInsideObstacle(_)
            | Error::InsideObstacle { .. }
            | Error::PointInsideShape
            | Error::NotFreeExterior
            | Error::OriginOutsideKernel => 3,
            Error::IterationLimit(_) => 4,
            _ => 1,
        }
    }
}
