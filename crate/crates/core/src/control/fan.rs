use crate::scalar::Scalar;

/// On/off fan with a deadband below the setpoint.
///
/// Switches on above `setpoint`, off below `setpoint - hysteresis`, and holds
/// its previous state in between.
pub fn fan_hysteresis<S: Scalar>(measurement: S, setpoint: S, hysteresis: S, currently_on: bool) -> bool {
    if measurement > setpoint {
        true
    } else if measurement < setpoint - hysteresis {
        false
    } else {
        currently_on
    }
}
