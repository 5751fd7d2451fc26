# Data access objects
