pub mod bench;
pub mod cli;
pub mod error;
pub mod fixed_configs;
pub mod greedy;
pub mod json;
pub mod lp;
pub mod model;
pub mod numerical;
pub mod oracle;
pub mod ptas;

pub use error::{CmsError, Result};
pub use model::{Configuration, Instance, InstanceKind, Job, MachineUse, Schedule, Slot};
