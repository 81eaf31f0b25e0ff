pub mod antipodal;
pub mod cli;
pub mod cone;
pub mod convex;
pub mod equilateral;
pub mod linalg;
pub mod lp;
pub mod norms;
pub mod oracle;
pub mod points;
pub mod program;
pub mod renorm;
pub mod report;
pub mod sampling;
pub mod suite;
