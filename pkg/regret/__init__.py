# Regret accounting and bounds
