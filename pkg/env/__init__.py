# Stochastic arm environments
