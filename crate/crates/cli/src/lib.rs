//! Library side of the `hil` binary: JSON schema parsing/serialization for
//! job inputs and the deterministic report model. Kept as a library so
//! integration tests can exercise round-trips without shelling out.

pub mod report;
pub mod schema;
