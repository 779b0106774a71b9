pub mod exact;
pub mod fig1;
pub mod future;
pub mod hitting;
pub mod martingale;
pub mod observables;
pub mod oracle;
pub mod variance;
