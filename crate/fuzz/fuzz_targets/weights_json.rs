//! Any weights file the parser accepts must be safe to push through the
//! whole pipeline: window collapse, kernel construction, spectra, and a
//! small smoothing run. Internal shape assertions double as oracles here.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(theta) = arsmooth::io::parse_weights_json(text) else {
        return;
    };
    let _ = theta.window();
    let _ = theta.normalized_p();
    if let Ok(kernel) = arsmooth::spectral::ARKernel::from_theta(&theta) {
        let _ = kernel.spectrum(16);
        let _ = kernel.effective_window(16);
    }
    let y = arsmooth::Signal::new(vec![1.0, -2.0, 3.5, 0.25, 0.0]).unwrap();
    let _ = arsmooth::smoother::ar_smooth(&y, &theta);
});
