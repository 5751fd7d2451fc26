# Configuration modules
