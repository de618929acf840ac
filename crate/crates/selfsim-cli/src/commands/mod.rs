pub mod decay;
pub mod heteroclinic;
pub mod homoclinic;
pub mod levelset;
pub mod pde;
pub mod periodic;
