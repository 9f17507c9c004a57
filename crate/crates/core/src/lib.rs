pub mod closed_form;
pub mod euler;
pub mod identities;
pub mod logsine;
pub mod numerics;
pub mod series;
pub mod verify;
