//! Analysis of analytic functions in the unit disc: function models evaluated
//! in log scale, maximum modulus and integral means with their growth orders,
//! zero counting in polar windows, canonical products, radial smoothing
//! integrals, scale-comparison orders, radial-set densities, and gap-series
//! construction from growth profiles.

pub mod density;
pub mod gap;
pub mod means;
pub mod model;
pub mod modulus;
pub mod polya;
pub mod product;
pub mod smoothing;
pub mod zeros;

pub use density::{upper_density, RadialSet};
pub use gap::{gap_series_from_profile, GapContact, GapSeries};
pub use means::{integral_mean_p, integral_means, mean_orders, MeanOrders};
pub use model::{
    AnalyticFunctionModel, ClosedForm, Evaluator, SeriesTerm, ZeroSequence, ZERO_PROXIMITY,
};
pub use modulus::{disc_orders, max_modulus, DiscOrders, MaxModulus};
pub use polya::{default_scale_grids, polya_order, psi_tilde, ScaleOrder};
pub use product::{
    canonical_product, default_genus, exceptional_discs, interpolation_kernel,
    log_weierstrass_factor, outside_all_discs, product_lower_envelope_fit, tsuji_sum,
    weierstrass_factor, ProductValue,
};
pub use smoothing::{
    max_real_part, smoothing_integral_from_profile, smoothing_integral_i_alpha,
};
pub use zeros::{zero_count_disc, zero_count_polar, zero_count_polar_grid};
