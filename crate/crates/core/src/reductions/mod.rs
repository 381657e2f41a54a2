//! Gadget constructions from 3-SAT, with the checkers that go with them.

pub mod ccpp;
pub mod cnf;
pub mod sat;

pub use ccpp::{assignment_to_partition, build_ccpp_instance, ccpp_optimum, ccpp_solve_exact, verify_ccpp_partition, CcppInstance};
pub use cnf::CnfFormula;
pub use sat::{assignment_to_schedule, build_sat_instance, extract_assignment, Role, SatInstance};
