# stallsim command-line surface
