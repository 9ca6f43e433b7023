# Feasible-set maximisation oracles
